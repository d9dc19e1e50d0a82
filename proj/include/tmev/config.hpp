#pragma once

#include <string>

#include "tmev/ints.hpp"

namespace tmev {

// Defaults shared by every subcommand.  A JSON file named by the
// TMEV_CONFIG environment variable overrides them; command-line flags
// override both.  `seed` only feeds fixture generation; `fee_bps` is
// the default fee for pools that do not declare one.
struct Config {
  int depth = 3;
  int unroll = 1;
  int fee_bps = 0;
  Int budget = 0;
  bool value_residual_y = false;
  uint64_t seed = 0;
};

// Throws FixtureError on malformed JSON, unknown keys, or values that
// break the invariants (depth >= 1, unroll >= 1, fee_bps/budget >= 0).
Config parse_config(const std::string& text);

// Resolves TMEV_CONFIG; returns defaults when the variable is unset.
Config load_config_from_env();

}  // namespace tmev
