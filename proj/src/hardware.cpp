#include "orbsim/hardware.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbsim {

void HardwareConfig::validate() const {
  if (!(battery_capacity_wh > 0.0)) throw std::invalid_argument("hardware.battery_capacity_wh must be positive");
  if (!(0.0 < soc_critical && soc_critical < soc_brownout && soc_brownout < soc_safe &&
        soc_safe < 1.0)) {
    throw std::invalid_argument(
        "hardware thresholds must satisfy 0 < soc_critical < soc_brownout < soc_safe < 1");
  }
  if (!(t_nominal_c < t_max_c)) throw std::invalid_argument("hardware.t_nominal_c must be below t_max_c");
  if (solar_peak_w < 0.0 || p_idle_w < 0.0 || p_task_w < 0.0 || tdp_w < 0.0) {
    throw std::invalid_argument("hardware powers must be non-negative");
  }
  if (!(compute_budget_gflops > 0.0)) throw std::invalid_argument("hardware.compute_budget_gflops must be positive");
  if (!(thermal_tau_s > 0.0)) throw std::invalid_argument("hardware.thermal_tau_s must be positive");
}

ExecutionEnvelope execution_envelope(const HardwareConfig& hw, double dt_s) {
  const int slots =
      hw.p_task_w > 0.0 ? static_cast<int>(std::floor((hw.tdp_w - hw.p_idle_w) / hw.p_task_w))
                        : 0;
  return {hw.compute_budget_gflops * dt_s, std::max(0, slots)};
}

double solar_power(const HardwareConfig& hw, bool sunlit, Vec3 position, Vec3 sun_dir) {
  if (!sunlit) return 0.0;
  const double cos_theta = dot(position, sun_dir) / norm(position);
  return hw.solar_peak_w * std::max(0.0, cos_theta);
}

double load_power(const HardwareConfig& hw, int running_inferences) {
  return hw.p_idle_w + running_inferences * hw.p_task_w;
}

double step_battery(const HardwareConfig& hw, double soc, double p_solar_w, double p_load_w,
                    double dt_s) {
  const double delta = (p_solar_w - p_load_w) * dt_s / (hw.battery_capacity_wh * 3600.0);
  return std::clamp(soc + delta, 0.0, 1.0);
}

double step_thermal(const HardwareConfig& hw, double temperature_c, double p_load_w, bool sunlit,
                    double dt_s) {
  const double t_eq = hw.t_space_c + hw.k_power_c_per_w * p_load_w + (sunlit ? hw.k_sun_c : 0.0);
  return temperature_c + (dt_s / hw.thermal_tau_s) * (t_eq - temperature_c);
}

int floor_limited_concurrency(const HardwareConfig& hw, double soc, double temperature_c,
                              double p_solar_w, double dt_s, int limit) {
  if (temperature_c >= hw.t_max_c) return 0;
  int n = std::max(0, limit);
  while (n > 0 &&
         soc + (p_solar_w - load_power(hw, n)) * dt_s / (hw.battery_capacity_wh * 3600.0) <
             hw.soc_critical) {
    --n;
  }
  return n;
}

int harvest_limited_concurrency(const HardwareConfig& hw, double p_solar_w, int limit) {
  if (hw.p_task_w <= 0.0) return std::max(0, limit);
  const double surplus = p_solar_w - hw.p_idle_w;
  if (surplus <= 0.0) return 0;
  return std::clamp(static_cast<int>(std::floor(surplus / hw.p_task_w)), 0, std::max(0, limit));
}

void EnergyLedger::record(const HardwareConfig& hw, double soc_before, double soc_after,
                          double p_solar_w, double p_load_w, double dt_s) {
  const double in_wh = p_solar_w * dt_s / 3600.0;
  const double out_wh = p_load_w * dt_s / 3600.0;
  const double applied_wh = (soc_after - soc_before) * hw.battery_capacity_wh;
  harvested_wh += in_wh;
  consumed_wh += out_wh;
  clipped_wh += (in_wh - out_wh) - applied_wh;
  stored_wh += applied_wh;
}

}  // namespace orbsim
