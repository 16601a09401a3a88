#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbsim/hardware.hpp"
#include "orbsim/scheduler.hpp"
#include "orbsim/workload.hpp"

namespace orbsim {

// Sum over executed heads of weight times the event indicator.
double scientific_value(std::span<const Execution> executions, const TaskSet& tasks);
double scientific_value(const Execution& execution, const TaskSet& tasks);

// Gini-based balance over ordered pairs, in percent. 100 when total is zero.
double load_balance(std::span<const double> values);

struct OperationalHealth {
  double mean_soc;
  double reserve_pct;
  double brownout_pct;
};

OperationalHealth operational_health(std::span<const double> soc_series, double soc_safe,
                                     double soc_brownout);

// Fraction of windows with no executed image.
double inactivity_fraction(std::span<const std::uint32_t> window_executions);

struct TaskReport {
  std::string name;
  std::uint64_t executions = 0;
  std::uint64_t detections = 0;
  double recall_weighted_detections = 0.0;
  std::uint64_t generated_events = 0;
  std::uint64_t offloaded = 0;
  std::optional<double> precision_pct;
};

struct MetricsReport {
  double hours = 0.0;
  int satellites = 0;
  double scientific_value = 0.0;
  double goodput_sv_per_hr = 0.0;
  double throughput_images_per_hr = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t executed_images = 0;
  std::uint64_t executed_heads = 0;
  double execution_rate_pct = 0.0;
  double head_execution_rate_pct = 0.0;
  double coverage_pct = 0.0;
  double mean_soc = 0.0;
  double reserve_pct = 0.0;
  double brownout_pct = 0.0;
  double min_soc = 1.0;
  double max_soc = 0.0;
  double load_balance_pct = 100.0;
  double mean_temperature_c = 0.0;
  double peak_temperature_c = 0.0;
  double mean_inactivity = 0.0;
  std::vector<double> inactivity_by_satellite;
  std::vector<double> sv_by_satellite;
  std::vector<TaskReport> tasks;
  std::uint64_t offloads = 0;
  std::uint64_t expired = 0;
  std::uint64_t dropped = 0;
  double eclipse_fraction = 0.0;
  double mean_isl_degree = 0.0;
  double energy_residual_wh = 0.0;
  double harvested_wh = 0.0;
  double consumed_wh = 0.0;
  double clipped_wh = 0.0;
  std::uint64_t idle_below_floor_steps = 0;
};

// Per-satellite counters; each worker owns one.
struct SatelliteTally {
  double sv_credited = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t executed_images = 0;
  std::uint64_t executed_heads = 0;
  std::uint64_t expired = 0;
  std::uint64_t dropped = 0;
  std::uint64_t eclipsed_steps = 0;
  std::uint64_t idle_below_floor_steps = 0;
  double soc_sum = 0.0;
  std::uint64_t soc_samples = 0;
  std::uint64_t reserve_steps = 0;
  std::uint64_t brownout_steps = 0;
  double min_soc = 1.0;
  double max_soc = 0.0;
  double temperature_sum = 0.0;
  double peak_temperature_c = -1e300;
  double initial_soc = 1.0;
  EnergyLedger energy;
  std::vector<std::uint32_t> window_executions;
  std::vector<std::uint64_t> generated_events;

  void sample_state(double soc, double temperature_c, const HardwareConfig& hw);
};

struct FleetTally {
  std::vector<TaskReport> tasks;
  std::uint64_t offloads = 0;
  double degree_sum = 0.0;
  std::uint64_t degree_samples = 0;

  explicit FleetTally(const TaskSet& task_set);
  // Credits an execution to its origin satellite.
  void credit(const Execution& e, const TaskSet& task_set, std::span<SatelliteTally> sats);
};

MetricsReport build_report(std::span<const SatelliteTally> sats, const FleetTally& fleet,
                           std::span<const SatelliteState> final_states, const HardwareConfig& hw,
                           double duration_s);

}  // namespace orbsim
