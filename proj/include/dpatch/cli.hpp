#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpatch {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2 };

/// Command-line entry point. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dpatch
