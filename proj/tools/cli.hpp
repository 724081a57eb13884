#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace posauction::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk         = 0;
inline constexpr int kViolations = 1;
inline constexpr int kUsage      = 2;

/// Runs the command line `args` (without the program name), writing reports
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

}  // namespace posauction::cli
