#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csmri::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_error = 1,
  exit_usage = 2,
  exit_not_converged = 3
};

/// Runs one command. `args` excludes the program name.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

} // namespace csmri::cli
