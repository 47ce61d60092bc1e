#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pforge::cli {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kBudgetExceeded = 3 };

/// Runs `pforge <subcommand> ...`; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pforge::cli
