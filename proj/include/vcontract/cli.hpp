#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vcontract {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitUsage = 2,
  kExitBudget = 3,
};

/// Runs the command line `args` (without the program name). The report
/// document goes to --out when given, otherwise to `out`; usage text and
/// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vcontract
