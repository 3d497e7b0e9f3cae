#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spencer::cli {

enum ExitCode : int { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

/// Runs the command line (args excludes the program name). Human output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spencer::cli
