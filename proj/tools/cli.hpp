#pragma once

#include "gaitfft/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gaitfft::cli {

/// Process exit codes. Values are stable across releases.
enum class ExitCode : int {
  ok = 0,
  usage = 2,
  io = 3,
  parse = 4,
  calibration = 5,
  validation = 6,
  length_mismatch = 7,
  scenario = 8,
  internal = 9,
};

ExitCode exit_code_for(ErrorKind kind);

/// Runs one invocation; args exclude the program name. Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaitfft::cli
