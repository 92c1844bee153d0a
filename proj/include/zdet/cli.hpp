#pragma once

#include <ostream>

namespace zdet {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitPass = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitCheckFail = 3,
};

/// Runs the `zdet` command line. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zdet
