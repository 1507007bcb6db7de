#ifndef CFCM_CLI_HPP
#define CFCM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cfcm {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalidInput = 2,
  kExitInconsistent = 3,
  kExitZeroProbability = 4,
};

/// Runs the tool. `args[0]` is the program name; `in` backs the "-" input path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cfcm

#endif  // CFCM_CLI_HPP
