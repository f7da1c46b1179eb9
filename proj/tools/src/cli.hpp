#pragma once

// The tdpair command-line interface as a callable function.

#include <ostream>

namespace tdpair::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// Parses argv, runs one subcommand, writes the JSON report to `out` (or to
// --output) and a human summary to `err`.  Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tdpair::cli
