#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace swimmer {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitNumerical = 3 };

/// Entry point behind the `swimmer` executable. `args` excludes the
/// program name. Results go to files and `out`; diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swimmer
