#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcrrgu::cli {

// Exit codes, one per error class.
enum ExitCode {
  exit_ok = 0,
  exit_usage = 1,       // unknown flags, malformed flag values, bad subcommand
  exit_io = 2,          // unreadable instance file
  exit_parse = 3,       // structurally broken instance JSON
  exit_validation = 4,  // semantic instance/profile violations
  exit_domain = 5,      // computation errors (bad scenario id, budget, ...)
  exit_internal = 70,
};

// Runs one invocation: args are argv[1..].  All regular output goes to
// `out`, diagnostics to `err`.  Never throws on user input; the return value
// is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace tcrrgu::cli
