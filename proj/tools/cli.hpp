#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace embtopo::cli {

enum ExitCode : int { kSuccess = 0, kComputationError = 1, kUsageError = 2 };

/// Runs the command line `args` (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace embtopo::cli
