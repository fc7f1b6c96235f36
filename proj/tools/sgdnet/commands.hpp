#pragma once

#include <iosfwd>

namespace sgdnet::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,  // bad flags, unreadable or malformed data
    kNumeric = 3,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgdnet::cli
