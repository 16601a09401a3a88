#include "orbsim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace orbsim {

double scientific_value(const Execution& execution, const TaskSet& tasks) {
  double sv = 0.0;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (((execution.tasks >> t) & 1U) && execution.image.has_event(t)) sv += tasks[t].weight;
  }
  return sv;
}

double scientific_value(std::span<const Execution> executions, const TaskSet& tasks) {
  double sv = 0.0;
  for (const Execution& e : executions) sv += scientific_value(e, tasks);
  return sv;
}

double load_balance(std::span<const double> values) {
  const std::size_t n = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  if (n == 0 || !(total > 0.0)) return 100.0;
  double gaps = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gaps += std::abs(values[i] - values[j]);
  }
  return (1.0 - gaps / (2.0 * static_cast<double>(n) * total)) * 100.0;
}

OperationalHealth operational_health(std::span<const double> soc_series, double soc_safe,
                                     double soc_brownout) {
  if (soc_series.empty()) return {0.0, 0.0, 0.0};
  double sum = 0.0;
  std::size_t reserve = 0, brownout = 0;
  for (double soc : soc_series) {
    sum += soc;
    reserve += soc > soc_safe;
    brownout += soc < soc_brownout;
  }
  const double n = static_cast<double>(soc_series.size());
  return {sum / n, 100.0 * static_cast<double>(reserve) / n,
          100.0 * static_cast<double>(brownout) / n};
}

double inactivity_fraction(std::span<const std::uint32_t> window_executions) {
  if (window_executions.empty()) return 0.0;
  const auto idle = std::count(window_executions.begin(), window_executions.end(), 0U);
  return static_cast<double>(idle) / static_cast<double>(window_executions.size());
}

void SatelliteTally::sample_state(double soc, double temperature_c, const HardwareConfig& hw) {
  soc_sum += soc;
  ++soc_samples;
  reserve_steps += soc > hw.soc_safe;
  brownout_steps += soc < hw.soc_brownout;
  min_soc = std::min(min_soc, soc);
  max_soc = std::max(max_soc, soc);
  temperature_sum += temperature_c;
  peak_temperature_c = std::max(peak_temperature_c, temperature_c);
}

FleetTally::FleetTally(const TaskSet& task_set) {
  for (const Task& t : task_set) {
    TaskReport r;
    r.name = t.name;
    tasks.push_back(r);
  }
}

void FleetTally::credit(const Execution& e, const TaskSet& task_set,
                        std::span<SatelliteTally> sats) {
  SatelliteTally& origin = sats[static_cast<std::size_t>(e.image.origin)];
  origin.sv_credited += scientific_value(e, task_set);
  for (std::size_t t = 0; t < task_set.size(); ++t) {
    if (!((e.tasks >> t) & 1U)) continue;
    ++tasks[t].executions;
    if (e.image.has_event(t)) {
      ++tasks[t].detections;
      tasks[t].recall_weighted_detections += task_set[t].accuracy;
    }
  }
}

MetricsReport build_report(std::span<const SatelliteTally> sats, const FleetTally& fleet,
                           std::span<const SatelliteState> final_states, const HardwareConfig& hw,
                           double duration_s) {
  MetricsReport r;
  r.hours = duration_s / 3600.0;
  r.satellites = static_cast<int>(sats.size());
  r.tasks = fleet.tasks;
  r.offloads = fleet.offloads;
  double soc_sum = 0.0, temp_sum = 0.0;
  std::uint64_t samples = 0, reserve = 0, brownout = 0, eclipsed = 0;
  double inactivity_sum = 0.0;
  std::uint64_t generated = 0;
  r.peak_temperature_c = sats.empty() ? 0.0 : -1e300;
  for (std::size_t i = 0; i < sats.size(); ++i) {
    const SatelliteTally& s = sats[i];
    r.scientific_value += s.sv_credited;
    r.sv_by_satellite.push_back(s.sv_credited);
    r.arrivals += s.arrivals;
    r.executed_images += s.executed_images;
    r.executed_heads += s.executed_heads;
    r.expired += s.expired;
    r.dropped += s.dropped;
    r.idle_below_floor_steps += s.idle_below_floor_steps;
    soc_sum += s.soc_sum;
    temp_sum += s.temperature_sum;
    samples += s.soc_samples;
    reserve += s.reserve_steps;
    brownout += s.brownout_steps;
    eclipsed += s.eclipsed_steps;
    if (s.soc_samples > 0) {
      r.min_soc = std::min(r.min_soc, s.min_soc);
      r.max_soc = std::max(r.max_soc, s.max_soc);
      r.peak_temperature_c = std::max(r.peak_temperature_c, s.peak_temperature_c);
    }
    const double inactive = inactivity_fraction(s.window_executions);
    r.inactivity_by_satellite.push_back(inactive);
    inactivity_sum += inactive;
    for (std::size_t t = 0; t < s.generated_events.size() && t < r.tasks.size(); ++t) {
      r.tasks[t].generated_events += s.generated_events[t];
      generated += s.generated_events[t];
    }
    r.harvested_wh += s.energy.harvested_wh;
    r.consumed_wh += s.energy.consumed_wh;
    r.clipped_wh += s.energy.clipped_wh;
    if (i < final_states.size()) {
      const double expected = (final_states[i].soc - s.initial_soc) * hw.battery_capacity_wh;
      r.energy_residual_wh = std::max(r.energy_residual_wh,
                                      std::abs(s.energy.stored_wh - expected));
      r.energy_residual_wh = std::max(
          r.energy_residual_wh,
          std::abs((s.energy.net_wh() - s.energy.clipped_wh) - s.energy.stored_wh));
    }
  }
  if (samples == 0) {
    r.min_soc = r.max_soc = 0.0;
    r.peak_temperature_c = 0.0;
  }
  std::uint64_t detected = 0;
  for (TaskReport& t : r.tasks) {
    detected += t.detections;
    if (t.executions > 0) {
      t.precision_pct = 100.0 * static_cast<double>(t.detections) / static_cast<double>(t.executions);
    }
  }
  if (r.hours > 0.0) {
    r.goodput_sv_per_hr = r.scientific_value / r.hours;
    r.throughput_images_per_hr = static_cast<double>(r.executed_images) / r.hours;
  }
  if (r.arrivals > 0) {
    r.execution_rate_pct =
        100.0 * static_cast<double>(r.executed_images) / static_cast<double>(r.arrivals);
    const double heads = static_cast<double>(r.arrivals) * static_cast<double>(r.tasks.size());
    r.head_execution_rate_pct = 100.0 * static_cast<double>(r.executed_heads) / heads;
  }
  r.coverage_pct = generated > 0 ? 100.0 * static_cast<double>(detected) / static_cast<double>(generated) : 0.0;
  if (samples > 0) {
    const double n = static_cast<double>(samples);
    r.mean_soc = soc_sum / n;
    r.reserve_pct = 100.0 * static_cast<double>(reserve) / n;
    r.brownout_pct = 100.0 * static_cast<double>(brownout) / n;
    r.mean_temperature_c = temp_sum / n;
    r.eclipse_fraction = static_cast<double>(eclipsed) / n;
  }
  r.load_balance_pct = load_balance(r.sv_by_satellite);
  r.mean_inactivity = sats.empty() ? 0.0 : inactivity_sum / static_cast<double>(sats.size());
  r.mean_isl_degree =
      fleet.degree_samples > 0 ? fleet.degree_sum / static_cast<double>(fleet.degree_samples) : 0.0;
  return r;
}

}  // namespace orbsim
