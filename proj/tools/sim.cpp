// Command-line front end: run, sweep and validate-dropout.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "orbsim/config.hpp"
#include "orbsim/outputs.hpp"
#include "orbsim/runner.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO constellation scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string axis;
  std::string values;

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--config", config_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_dir, "output directory (default: output.dir)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario along one axis");
  sweep->add_option("--config", config_path, "base scenario JSON file")->required();
  sweep->add_option("--axis", axis,
                    "beta, tasks, isl_failure, heterogeneity, pricing_ablation, "
                    "context_ablation or scheduler")
      ->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--seed", seed, "override the config seed");
  sweep->add_option("--out", out_dir, "output directory (default: output.dir)");

  CLI::App* dropout =
      app.add_subcommand("validate-dropout", "compare simulated and analytic dropout SoC");
  dropout->add_option("--config", config_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    orbsim::ScenarioConfig cfg = orbsim::load_config(config_path);
    if (seed) cfg.seed = *seed;
    const std::filesystem::path dir = out_dir ? *out_dir : cfg.output.dir;

    if (*run) {
      const orbsim::MetricsReport report = orbsim::run_to_directory(cfg, dir);
      std::cout << orbsim::summary_text(report, cfg);
    } else if (*sweep) {
      const auto points = orbsim::run_sweep(cfg, orbsim::parse_sweep_axis(axis),
                                            orbsim::split_values(values), dir);
      std::cout << orbsim::metrics_csv_header(axis);
      for (const auto& p : points) std::cout << orbsim::metrics_csv_row(p.report, p.cfg, p.value);
    } else if (*dropout) {
      const orbsim::DropoutValidation v = orbsim::validate_dropout(cfg);
      std::cout << orbsim::format_dropout(v);
      return v.matches_reference() ? 0 : 1;
    }
  } catch (const orbsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
