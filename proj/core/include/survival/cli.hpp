#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace survival {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `survival` command line tool. `args` excludes the
/// program name. Subcommands: train, eval, baseline, em-demo, oracle-check.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace survival
