#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace passflow::cli {

enum ExitCode { kOk = 0, kInvalid = 1, kUsage = 2, kStalled = 3 };

/// Runs the command line `args` (without the program name) and returns the
/// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace passflow::cli
