#pragma once

#include "orbsim/orbit.hpp"

namespace orbsim {

struct HardwareConfig {
  double battery_capacity_wh = 100.0;
  double solar_peak_w = 120.0;
  double p_idle_w = 15.0;
  // Draw of one running inference (one task head on one image).
  double p_task_w = 10.0;
  double tdp_w = 60.0;
  double compute_budget_gflops = 2.0;
  double soc_critical = 0.15;
  double soc_brownout = 0.20;
  double soc_safe = 0.35;
  double t_nominal_c = 50.0;
  double t_max_c = 85.0;
  double thermal_tau_s = 300.0;
  double t_space_c = 30.0;
  double k_power_c_per_w = 0.9;
  double k_sun_c = 8.0;

  void validate() const;

  bool operator==(const HardwareConfig&) const = default;
};

// What a satellite can spend this step.
struct ExecutionEnvelope {
  double gflops_budget;
  int max_concurrent;
};

ExecutionEnvelope execution_envelope(const HardwareConfig& hw, double dt_s);

double solar_power(const HardwareConfig& hw, bool sunlit, Vec3 position, Vec3 sun_dir);

double load_power(const HardwareConfig& hw, int running_inferences);

double step_battery(const HardwareConfig& hw, double soc, double p_solar_w, double p_load_w,
                    double dt_s);

double step_thermal(const HardwareConfig& hw, double temperature_c, double p_load_w, bool sunlit,
                    double dt_s);

// Largest inference count whose end-of-step SoC stays at or above the critical
// floor, capped at `limit`. Zero when throttled (T >= t_max).
int floor_limited_concurrency(const HardwareConfig& hw, double soc, double temperature_c,
                              double p_solar_w, double dt_s, int limit);

// Largest inference count the current harvest pays for on its own.
int harvest_limited_concurrency(const HardwareConfig& hw, double p_solar_w, int limit);

// Energy bookkeeping for one satellite. `stored_wh` is the telescoped sum of
// applied SoC deltas; `net_wh - clipped_wh` must equal it to rounding.
struct EnergyLedger {
  double harvested_wh = 0.0;
  double consumed_wh = 0.0;
  double clipped_wh = 0.0;
  double stored_wh = 0.0;

  void record(const HardwareConfig& hw, double soc_before, double soc_after, double p_solar_w,
              double p_load_w, double dt_s);
  double net_wh() const { return harvested_wh - consumed_wh; }
};

}  // namespace orbsim
