#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rolr {

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,
  kExitConfig = 2,
  kExitBounds = 3,
};

/// Entry point of the `rolr` tool. Subcommands: check-losses, run, sweep, verify-bounds.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);
/// Same, with argv[0] omitted.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rolr
