#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tspectra::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitNumeric = 3,
  kExitResourceCap = 4,
};

/// Run the command line `args` (without the program name). Diagnostics go to
/// `err`, short progress and result summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tspectra::cli
