#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace autobid::cli {

enum ExitCode : int { kAccept = 0, kReject = 1, kInputError = 2, kParameterError = 3, kBudgetError = 4 };

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autobid::cli
