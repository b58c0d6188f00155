#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dipole::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kPropertyFailure = 2,
  kResourceCap = 3,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Expands `--config FILE` into `--key=value` flags for keys not already given.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace dipole::cli
