#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hecke::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// Parses `args` (without the program name), runs the command and writes the
/// JSON report to `out` (or to --output). Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hecke::cli
