#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace skewjs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSemantic = 3;

/// Runs one subcommand. `args` excludes the program name. Output files are
/// written as requested; stdout-style text goes to `out`, diagnostics to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace skewjs::cli
