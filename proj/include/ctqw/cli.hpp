// Command-line front end. Subcommands: evolve, unitary, mixing, bounds,
// sweep, transition, compare, verify.
#ifndef CTQW_CLI_HPP
#define CTQW_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace ctqw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` includes the program name. Results go to `out` (or the file
/// named by --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g, the shortest width that round-trips every double.
std::string format_number(double v);

}  // namespace ctqw::cli

#endif  // CTQW_CLI_HPP
