#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace probint {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalid = 2,
  kExitTooLarge = 3,
  kExitEmpty = 4,
  kExitUnbalanced = 5,
  kExitNotIntegrated = 6,
};

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace probint
