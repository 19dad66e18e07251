#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace minkcurv {

// Exit codes: 0 success (verify: every check passed), 1 a check failed or a
// computation raised, 2 bad configuration or unknown command.
enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitConfig = 2 };

struct RunOptions {
  std::string command;
  std::string config_text;  // JSON; empty means defaults
  // Flag overrides, applied on top of the config.
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<int> grid;
};

const std::vector<std::string>& command_names();

// Runs one command, writing result files into the output directory and a
// summary to `out`. Errors go to `err`.
int run_command(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace minkcurv
