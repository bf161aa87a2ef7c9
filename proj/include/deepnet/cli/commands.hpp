#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace deepnet::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,      // bad flags, config schema or argument values
  kExitData = 3,        // unreadable, malformed or incompatible data/model
  kExitDivergence = 4,  // non-finite training loss
  kExitIo = 5,          // files that cannot be opened or written
};

// Runs `deepnet <args...>` (args exclude the program name) and returns the exit
// code. Errors are reported on `err`; tables and JSON go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deepnet::cli
