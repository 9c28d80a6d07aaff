#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ellscope {

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;           // Elliptic / PASS / success
inline constexpr int kExitUsage = 1;        // bad flags, unknown energy, I/O failure
inline constexpr int kExitViolated = 2;     // Violated / some check FAILed
inline constexpr int kExitIndeterminate = 3;

/// Entry point of the ellscope command line. `args` excludes the program
/// name. Commands: check, scan, trace, verify, oracle.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ellscope
