#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace condevt::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kInputError = 2,
    kFitFailure = 3,
    kScalingInapplicable = 4,
};

/// Runs one CLI invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace condevt::cli
