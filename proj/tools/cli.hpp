#pragma once

#include <iosfwd>

namespace metricat::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kBudget = 3 };

/// Entry point shared by the binary and the CLI tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metricat::cli
