#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pantograph::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kTruncation = 3,
  kEscape = 4,
  kCheckFailed = 5,
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pantograph::cli
