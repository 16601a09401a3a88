#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "orbsim/baselines.hpp"
#include "orbsim/hardware.hpp"
#include "orbsim/isl.hpp"
#include "orbsim/orbit.hpp"
#include "orbsim/pricing.hpp"
#include "orbsim/scheduler.hpp"
#include "orbsim/workload.hpp"

namespace orbsim {

// Raised for malformed, unknown, or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchedulerKind { kMarginalCost, kStaticFifo, kPriority, kEsa, kPhoenix };

struct Relaxations {
  bool free_isl = false;
  bool infinite_battery = false;
  bool instant_compute = false;
  // All of the above, plus every head of every arrival runs.
  bool oracle = false;

  bool any_isl_free() const { return free_isl || oracle; }
  bool battery_unbounded() const { return infinite_battery || oracle; }
  bool compute_unbounded() const { return instant_compute || oracle; }

  bool operator==(const Relaxations&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  bool timeseries = false;
  double timeseries_interval_s = 60.0;
  bool trace = false;

  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  std::string name = "scenario";
  double duration_s = 259200.0;
  double timestep_s = 1.0;
  double ttl_s = 300.0;
  int threads = 1;
  std::string kernel_isa = "auto";
  ConstellationConfig constellation;
  HardwareConfig hardware;
  PricingConfig pricing;
  IslConfig isl;
  WorkloadConfig workload;
  SchedulerKind scheduler = SchedulerKind::kMarginalCost;
  SchedulerVariant variant;
  EsaConfig esa;
  PhoenixConfig phoenix;
  Relaxations relaxations;
  OutputConfig output;

  std::uint64_t steps() const;
  // Pricing thresholds track the hardware model.
  PricingConfig effective_pricing() const;
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

std::string_view to_string(SchedulerKind kind);
std::string_view to_string(PricingMode mode);
std::string_view to_string(ContextMode mode);
std::string_view to_string(ValuationMode mode);
SchedulerKind parse_scheduler_kind(std::string_view text);
PricingMode parse_pricing_mode(std::string_view text);
ContextMode parse_context_mode(std::string_view text);
ValuationMode parse_valuation_mode(std::string_view text);

// A seed is mandatory; every other field defaults.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::string& path);
// The fully defaulted config as pretty JSON.
std::string emit_config(const ScenarioConfig& cfg);

}  // namespace orbsim
