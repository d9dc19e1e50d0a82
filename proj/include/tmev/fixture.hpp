#pragma once

#include <string>
#include <vector>

#include "tmev/sim.hpp"

namespace tmev::sim {

// Scenario files are JSON: {"accounts": [...], "tokens": [...],
// "pools": [...]}; every amount is a decimal string.  Interpreted
// tokens name a TokenLang source path resolved against the scenario
// file's directory.  Documented in docs/formats.md.
ChainState load_scenario(const std::string& path);
ChainState parse_scenario(const std::string& json_text,
                          const std::string& base_dir);

// Bundle files: one tx per line, `sender target function arg...`;
// blank lines and #-comments skipped.
std::vector<Tx> load_bundle(const std::string& path);
std::vector<Tx> parse_bundle(const std::string& text);

}  // namespace tmev::sim
