#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sturmgraph::cli {

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kInputError = 2, kNumericalError = 3 };

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sturmgraph::cli
