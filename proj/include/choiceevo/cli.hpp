#ifndef CHOICEEVO_CLI_HPP
#define CHOICEEVO_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace choiceevo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the command-line tool. `args` includes the program name.
/// Results go to --output (or `out` when absent); diagnostics go to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace choiceevo

#endif  // CHOICEEVO_CLI_HPP
