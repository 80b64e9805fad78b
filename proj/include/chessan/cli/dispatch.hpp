#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chessan::cli {

inline constexpr int kExitUsage = 1;
inline constexpr int kExitRunFailure = 2;
inline constexpr int kExitStoreUnreachable = 3;

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Summary lines go to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace chessan::cli
