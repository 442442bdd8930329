#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ansflow/commands.hpp"
#include "ansflow/io.hpp"

int main(int argc, char** argv) {
  using namespace ansflow;

  CLI::App app{"Anisotropic Navier-Stokes harness"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::string input;
  std::uint64_t seed = 0;
  bool force = false;

  std::string names;
  for (const auto& n : command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("input", input, "plot-data: wide diagnostics CSV (default <out>/diagnostics.csv)");
  app.add_option("--config", config_path, "Flat key = value configuration file");
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Override every seed in the configuration");
  app.add_flag("--force", force, "Run even when the noise model fails the Condition C gates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  bool known = false;
  for (const auto& n : command_names()) known = known || n == command;
  if (!known) {
    std::cerr << "error: usage: unknown command '" << command << "'\n" << app.help();
    return kExitUsage;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(read_text_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitUsage;
  }
  if (*seed_opt) cfg.set_seed(seed);

  CommandOptions opts;
  opts.out_dir = out_dir;
  opts.force = force;
  opts.input = input;
  return run_command(command, cfg, opts, std::cout, std::cerr);
}
