// Command-line front end over the C API.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minkcurv/minkcurv.h"

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff-Gauss curvature of surfaces in normed spaces"};
  app.set_version_flag("--version", std::string(mkc_version()));

  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  int grid = 0;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(split(mkc_command_list())));
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for Monte Carlo sampling");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_option("--grid", grid, "Per-point sampling resolution")->check(CLI::Range(2, 2000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string config_text;
  if (!config_path.empty()) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
      std::cerr << "config error: cannot read " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    config_text = ss.str();
  }

  mkc_run_options opts{};
  opts.command = command.c_str();
  opts.config_json = config_text.c_str();
  opts.out_dir = *out_opt ? out_dir.c_str() : nullptr;
  opts.has_seed = *seed_opt ? 1 : 0;
  opts.seed = seed;
  opts.has_threads = *threads_opt ? 1 : 0;
  opts.threads = threads;
  opts.grid = grid;
  return mkc_run(&opts);
}
