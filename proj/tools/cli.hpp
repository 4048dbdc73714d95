#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pathspin::cli {

/// Runs the command line given as arguments (without the program name).
/// Reports go to `out`, diagnostics to `err`. Exit codes: 0 success,
/// 2 configuration error, 3 runtime invariant breach.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pathspin::cli
