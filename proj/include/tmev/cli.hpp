#pragma once

namespace tmev::cli {

// Exit codes: 0 success, 1 analysis findings with errors (failed
// scans, reverted bundles, replay mismatches), 2 usage or I/O errors.
int run(int argc, const char* const* argv);

}  // namespace tmev::cli
