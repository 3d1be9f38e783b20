#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cspmon {

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitNondeterministic = 2,
  kExitUsage = 3,
  kExitLimitOrIo = 4,
};

/// Entry point of the command-line tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cspmon
