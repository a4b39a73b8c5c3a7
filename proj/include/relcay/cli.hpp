#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relcay {

  enum ExitCode : int {
    kExitOk          = 0,
    kExitFailure     = 1,
    kExitValidation  = 2,
    kExitBudget      = 3,
    kExitUncertified = 4,
  };

  // args excludes the program name. Reports go to out (or --out files),
  // structured errors to err.
  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);
  int run(int argc, char** argv);

}  // namespace relcay
