#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlb::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kRuntimeFailure = 2 };

/// Runs the experiment CLI. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlb::cli
