#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pleig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pleig::cli
