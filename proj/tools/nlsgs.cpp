// Command-line runner for normalized ground-state experiments.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nlsgs/config.hpp"
#include "nlsgs/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Normalized ground states of coupled Schrodinger systems"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  for (const auto& name : nlsgs::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nlsgs::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  nlsgs::ExperimentConfig cfg;
  try {
    cfg = nlsgs::load_config(config_path);
  } catch (const nlsgs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return nlsgs::kExitConfig;
  }
  if (!cfg.command.empty() && cfg.command != command) {
    std::cerr << "config error: config is for '" << cfg.command << "', not '" << command << "'\n";
    return nlsgs::kExitConfig;
  }
  cfg.command = command;
  if (!out_dir.empty()) cfg.out = out_dir;
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;

  const auto outcome = nlsgs::run_guarded(cfg, std::cerr);
  std::cout << outcome.summary();
  if (!outcome.artifacts.empty()) std::cout << "artifacts in " << cfg.out << '\n';
  return outcome.exit_code;
}
