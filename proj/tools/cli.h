#pragma once

#include <iosfwd>

namespace fockherald::cli {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitContractBreach = 3;

/// Entry point behind the `fockherald` binary. Output goes to `out`, warnings
/// and structured errors to `err`. Returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace fockherald::cli
