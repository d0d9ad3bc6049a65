#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plankit::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,         // plan found, plan valid, input well-formed
  kFailure = 1,         // unsolvable, invalid plan, oracle mismatch
  kUsageError = 2,      // bad arguments, unreadable or malformed input
  kBudgetExhausted = 3  // node/depth/grounding budget ran out
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics and usage errors to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plankit::cli
