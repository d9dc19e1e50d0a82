#include "tmev/config.hpp"

#include <cstdlib>

#include "json.hpp"
#include "tmev/errors.hpp"
#include "tmev/report_io.hpp"

namespace tmev {

using nlohmann::json;

Config parse_config(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw FixtureError("config must be a JSON object");
  Config c;
  for (const auto& [key, val] : j.items()) {
    try {
      if (key == "depth") {
        c.depth = val.get<int>();
      } else if (key == "unroll") {
        c.unroll = val.get<int>();
      } else if (key == "fee_bps") {
        c.fee_bps = val.get<int>();
      } else if (key == "budget") {
        c.budget = val.is_string() ? from_dec(val.get<std::string>())
                                   : Int(val.get<int64_t>());
      } else if (key == "value_residual_y") {
        c.value_residual_y = val.get<bool>();
      } else if (key == "seed") {
        c.seed = val.get<uint64_t>();
      } else {
        throw FixtureError("unknown config key: " + key);
      }
    } catch (const json::exception&) {
      throw FixtureError("bad value for config key: " + key);
    }
  }
  if (c.depth < 1) throw FixtureError("depth must be >= 1");
  if (c.unroll < 1) throw FixtureError("unroll must be >= 1");
  if (c.fee_bps < 0 || c.fee_bps > 10000)
    throw FixtureError("fee_bps must lie in [0, 10000]");
  if (c.budget < 0) throw FixtureError("budget must be >= 0");
  return c;
}

Config load_config_from_env() {
  const char* path = std::getenv("TMEV_CONFIG");
  if (!path || !*path) return Config{};
  return parse_config(io::read_text_file(path));
}

}  // namespace tmev
