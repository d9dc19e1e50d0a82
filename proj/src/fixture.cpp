#include "tmev/fixture.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tmev/errors.hpp"
#include "tmev/parser.hpp"

namespace tmev::sim {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw FixtureError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Int dec_field(const json& j, const std::string& key, const Int& fallback) {
  if (!j.contains(key)) return fallback;
  return from_dec(j.at(key).get<std::string>());
}

std::map<Address, Int> dec_map(const json& j) {
  std::map<Address, Int> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = from_dec(it.value().get<std::string>());
  return out;
}

TokenInstance parse_token(const json& j, const std::string& base_dir) {
  std::string model = j.at("model").get<std::string>();
  if (model == "builtin_erc20") {
    TokenInstance t;
    t.model = TokenInstance::Model::BuiltinErc20;
    if (j.contains("balances")) t.balances = dec_map(j.at("balances"));
    return t;
  }
  if (model == "builtin_rebase") {
    TokenInstance t;
    t.model = TokenInstance::Model::BuiltinRebase;
    t.scale = dec_field(j, "scale", rebase_unit());
    if (j.contains("base_balances")) t.base = dec_map(j.at("base_balances"));
    return t;
  }
  if (model == "interpreted") {
    std::filesystem::path src(j.at("source").get<std::string>());
    if (src.is_relative()) src = std::filesystem::path(base_dir) / src;
    auto unit = std::make_shared<lang::SourceUnit>(
        lang::parse(read_file(src.string()), src.filename().string()));
    std::string contract =
        j.contains("contract") ? j.at("contract").get<std::string>() : "";
    TokenInstance t = make_interpreted_token(std::move(unit), contract);
    if (j.contains("scalars"))
      for (auto it = j.at("scalars").begin(); it != j.at("scalars").end(); ++it)
        t.scalars[it.key()] = from_dec(it.value().get<std::string>());
    if (j.contains("mappings"))
      for (auto it = j.at("mappings").begin(); it != j.at("mappings").end();
           ++it)
        t.mappings[it.key()] = dec_map(it.value());
    return t;
  }
  throw FixtureError("unknown token model: " + model);
}

PoolInstance parse_pool(const json& j) {
  PoolInstance p;
  p.kind = pool_kind_from_name(j.at("kind").get<std::string>());
  p.token_x = j.at("token_x").get<std::string>();
  p.token_y = j.at("token_y").get<std::string>();
  p.fee_bps = dec_field(j, "fee_bps", 0);
  switch (p.kind) {
    case PoolInstance::Kind::ReserveCpmm:
      p.rx = dec_field(j, "rx", 0);
      p.ry = dec_field(j, "ry", 0);
      break;
    case PoolInstance::Kind::LendingFixed:
      p.price_num = dec_field(j, "price_num", 1);
      p.price_den = dec_field(j, "price_den", 1);
      break;
    case PoolInstance::Kind::ConcTick: {
      p.liq_token = j.at("liq_token").get<std::string>();
      p.active_tick = j.at("active_tick").get<int>();
      for (const auto& pr : j.at("tick_prices"))
        p.tick_prices.emplace_back(from_dec(pr.at(0).get<std::string>()),
                                   from_dec(pr.at(1).get<std::string>()));
      break;
    }
    case PoolInstance::Kind::BalanceCpmm:
      break;
  }
  return p;
}

}  // namespace

namespace {

ChainState parse_scenario_impl(const std::string& json_text,
                               const std::string& base_dir) {
  json j = json::parse(json_text);
  ChainState st;
  if (j.contains("accounts"))
    for (const auto& a : j.at("accounts"))
      st.native_accounts.insert(a.get<std::string>());
  if (j.contains("tokens"))
    for (const auto& tj : j.at("tokens")) {
      std::string id = tj.at("id").get<std::string>();
      if (st.tokens.count(id)) throw FixtureError("duplicate token id: " + id);
      st.tokens.emplace(id, parse_token(tj, base_dir));
    }
  if (j.contains("pools"))
    for (const auto& pj : j.at("pools")) {
      std::string id = pj.at("id").get<std::string>();
      if (st.pools.count(id) || st.tokens.count(id))
        throw FixtureError("duplicate pool id: " + id);
      PoolInstance p = parse_pool(pj);
      if (!st.tokens.count(p.token_x) || !st.tokens.count(p.token_y))
        throw FixtureError("pool " + id + " references an unknown token");
      if (p.kind == PoolInstance::Kind::ConcTick &&
          !st.tokens.count(p.liq_token))
        throw FixtureError("pool " + id + " references an unknown liq token");
      st.pools.emplace(id, std::move(p));
    }
  return st;
}

}  // namespace

ChainState parse_scenario(const std::string& json_text,
                          const std::string& base_dir) {
  try {
    return parse_scenario_impl(json_text, base_dir);
  } catch (const json::exception& e) {
    throw FixtureError(std::string("bad scenario: ") + e.what());
  }
}

ChainState load_scenario(const std::string& path) {
  std::filesystem::path p(path);
  return parse_scenario(read_file(path), p.parent_path().string());
}

std::vector<Tx> parse_bundle(const std::string& text) {
  std::vector<Tx> txs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    Tx tx;
    if (!(ls >> tx.sender)) continue;  // blank line
    if (tx.sender[0] == '#') continue;
    if (!(ls >> tx.target >> tx.function))
      throw FixtureError("malformed bundle line: " + line);
    std::string arg;
    while (ls >> arg) tx.args.push_back(arg);
    txs.push_back(std::move(tx));
  }
  return txs;
}

std::vector<Tx> load_bundle(const std::string& path) {
  return parse_bundle(read_file(path));
}

}  // namespace tmev::sim
