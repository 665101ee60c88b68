#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smforge::cli {

enum ExitCode : int {
    kOk = 0,
    kModelError = 1,  // diagnostics, bad configuration or usage
    kIoError = 2,
    kRuntimeFault = 3,
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smforge::cli
