#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace posec::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kParseError = 2,
  kInvalidParameter = 3,
  kOverCap = 4,
};

// Runs the tool on `args` (without the program name), writing reports to
// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posec::cli
