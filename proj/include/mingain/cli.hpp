#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace mingain::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kConflict = 2,
    kNoConvergence = 3,
};

/// Runs the command line `args` (args[0] is the program name). Documents
/// named "-" are read from `in`; results go to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mingain::cli
