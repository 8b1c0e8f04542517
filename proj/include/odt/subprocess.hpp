#pragma once

#include <string>

namespace odt {

struct CommandResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
  std::string output;  // merged stdout and stderr
};

/// Runs `command` through /bin/sh in its own process group. On timeout the
/// whole group is killed.
CommandResult run_command(const std::string& command, double timeout_s);

/// Single-quotes `s` for /bin/sh.
std::string shell_quote(const std::string& s);

}  // namespace odt
