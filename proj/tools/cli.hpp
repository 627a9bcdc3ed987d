#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace degen::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kConfigError = 2,
    kNumericalError = 3,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace degen::cli
