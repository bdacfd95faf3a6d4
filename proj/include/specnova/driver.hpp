#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specnova::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kInternalError = 2 };

/// Runs one `specnova` invocation. args excludes the program name.
/// Results go to --output (or `out`), diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specnova::cli
