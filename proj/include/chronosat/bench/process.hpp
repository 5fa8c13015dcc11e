#pragma once

#include <string>

namespace chronosat::bench {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  double seconds = 0;
};

/// Runs `command` through /bin/sh in its own process group with stdout and
/// stderr appended to `log_path`. The group is killed after `timeout_s`.
ProcessResult run_shell(const std::string& command, double timeout_s, const std::string& log_path);

/// Single-quoted shell word.
std::string shell_quote(const std::string& s);

}  // namespace chronosat::bench
