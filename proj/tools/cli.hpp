#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace valkey::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kNotStabilized = 3,
};

/// Runs one command line (without the program name). Exactly one JSON
/// document goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace valkey::cli
