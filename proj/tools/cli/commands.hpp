#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oss::cli {

/// Exit codes of the `oss` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< input, guard or bound failure
inline constexpr int kExitUsage = 2;

/// Runs the tool with `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oss::cli
