#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stopflow::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kDomainError = 2, kIoError = 3 };

/// Runs the command line `args` (program name excluded). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stopflow::cli
