#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcrs {

// Exit codes of the command-line tool.
enum ExitCode { ExitProven = 0, ExitRefuted = 1, ExitUnknown = 2, ExitUsage = 3, ExitInternal = 4 };

// Runs one command line (args excludes the program name).  Reports go to
// `out` as key: value lines, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcrs
