#ifndef SWEEP_CLI_HPP
#define SWEEP_CLI_HPP

#include <iosfwd>

namespace sweep::cli {

enum ExitCode : int {
  ok = 0,
  config_error = 1,
  budget_exhausted = 2,
  projection_failed = 3,
  check_failed = 4,  // audit bound or rate gate not met
};

/// sweep {project|solve|rate|audit} --config PATH [--out DIR] [--seed N] [--permissive]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sweep::cli

#endif  // SWEEP_CLI_HPP
