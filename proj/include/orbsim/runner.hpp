#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orbsim/config.hpp"
#include "orbsim/engine.hpp"
#include "orbsim/metrics.hpp"

namespace orbsim {

// Runs a scenario and writes config.json, report.json, summary.txt,
// metrics.csv and the optional timeseries.csv / trace.csv into `dir`.
MetricsReport run_to_directory(const ScenarioConfig& cfg, const std::filesystem::path& dir);

enum class SweepAxis {
  kBeta,
  kTasks,
  kIslFailure,
  kHeterogeneity,
  kPricingAblation,
  kContextAblation,
  kScheduler,
};

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);
std::vector<std::string> split_values(const std::string& list);

// The base scenario with one axis set to `value`. Throws ConfigError for a
// value the axis does not accept.
ScenarioConfig apply_sweep_point(const ScenarioConfig& base, SweepAxis axis,
                                 const std::string& value);

struct SweepPoint {
  std::string value;
  ScenarioConfig cfg;
  MetricsReport report;
};

// Every point shares the base seed. With `out_dir`, each point writes into
// its own subdirectory and a combined metrics.csv keyed by value is written.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                  const std::vector<std::string>& values,
                                  const std::optional<std::filesystem::path>& out_dir = {});

struct DropoutRow {
  std::string task;
  double esv;
  std::optional<double> analytic_soc;
  std::optional<double> last_execution_soc;
  std::optional<double> reference_soc;
};

struct DropoutValidation {
  std::vector<DropoutRow> rows;
  // Tasks by decreasing last-execution SoC: the order in which they drop out.
  std::vector<std::string> dropout_order;
  double max_drain_per_step = 0.0;
  double tolerance = 0.015;

  bool matches_reference() const;
};

// One satellite in shadow at nominal temperature with an empty queue, one
// default-category image per step, SoC decaying from 0.25 to the floor.
DropoutValidation validate_dropout(const ScenarioConfig& cfg);
std::string format_dropout(const DropoutValidation& v);

}  // namespace orbsim
