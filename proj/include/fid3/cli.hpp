#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fid3 {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`; errors are a single line starting
/// with "error[<category>]: ".
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fid3
