#include "orbsim/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "orbsim/format.hpp"
#include "orbsim/outputs.hpp"

namespace orbsim {

MetricsReport run_to_directory(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  cfg.validate();
  std::filesystem::create_directories(dir);
  std::ofstream timeseries, trace;
  RunStreams streams;
  if (cfg.output.timeseries) {
    timeseries.open(dir / "timeseries.csv", std::ios::binary);
    streams.timeseries = &timeseries;
  }
  if (cfg.output.trace) {
    trace.open(dir / "trace.csv", std::ios::binary);
    streams.trace = &trace;
  }
  const MetricsReport report = run_scenario(cfg, streams);
  emit_outputs(report, cfg, dir);
  return report;
}

namespace {

const std::map<std::string, SweepAxis>& axis_names() {
  static const std::map<std::string, SweepAxis> names{
      {"beta", SweepAxis::kBeta},
      {"tasks", SweepAxis::kTasks},
      {"isl_failure", SweepAxis::kIslFailure},
      {"heterogeneity", SweepAxis::kHeterogeneity},
      {"pricing_ablation", SweepAxis::kPricingAblation},
      {"context_ablation", SweepAxis::kContextAblation},
      {"scheduler", SweepAxis::kScheduler},
  };
  return names;
}

double parse_number(const std::string& text, const std::string& axis) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("sweep axis '" + axis + "' expects numbers, got '" + text + "'");
  }
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& name) {
  const auto it = axis_names().find(name);
  if (it == axis_names().end()) throw ConfigError("unknown sweep axis '" + name + "'");
  return it->second;
}

std::string to_string(SweepAxis axis) {
  for (const auto& [name, a] : axis_names()) {
    if (a == axis) return name;
  }
  return "?";
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ScenarioConfig apply_sweep_point(const ScenarioConfig& base, SweepAxis axis,
                                 const std::string& value) {
  ScenarioConfig cfg = base;
  const std::string axis_name = to_string(axis);
  const auto reject = [&] {
    throw ConfigError("sweep axis '" + axis_name + "' does not accept '" + value + "'");
  };
  switch (axis) {
    case SweepAxis::kBeta:
      cfg.pricing.beta = parse_number(value, axis_name);
      break;
    case SweepAxis::kTasks: {
      const double n = parse_number(value, axis_name);
      if (n != std::floor(n)) reject();
      cfg.workload.num_tasks = static_cast<int>(n);
      break;
    }
    case SweepAxis::kIslFailure:
      cfg.constellation.isl_failure_prob = parse_number(value, axis_name);
      break;
    case SweepAxis::kHeterogeneity:
      if (value != "default" && value != "jitter" && value != "tiers" && value != "both") reject();
      cfg.constellation.phase_jitter = value == "jitter" || value == "both";
      cfg.constellation.altitude_tiers_km.clear();
      if (value == "tiers" || value == "both") {
        cfg.constellation.altitude_tiers_km = kDefaultAltitudeTiersKm;
      }
      break;
    case SweepAxis::kPricingAblation:
      if (value == "uniform_value") {
        cfg.variant.valuation = ValuationMode::kUniform;
      } else {
        try {
          cfg.variant.pricing = parse_pricing_mode(value);
        } catch (const std::invalid_argument&) {
          reject();
        }
      }
      break;
    case SweepAxis::kContextAblation:
      try {
        cfg.workload.context = parse_context_mode(value);
      } catch (const std::invalid_argument&) {
        reject();
      }
      break;
    case SweepAxis::kScheduler:
      try {
        cfg.scheduler = parse_scheduler_kind(value);
      } catch (const std::invalid_argument&) {
        reject();
      }
      break;
  }
  cfg.name = base.name + "/" + axis_name + "=" + value;
  cfg.validate();
  return cfg;
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, SweepAxis axis,
                                  const std::vector<std::string>& values,
                                  const std::optional<std::filesystem::path>& out_dir) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepPoint> points;
  for (const std::string& v : values) points.push_back({v, apply_sweep_point(base, axis, v), {}});
  std::string combined = metrics_csv_header(to_string(axis));
  for (SweepPoint& p : points) {
    if (out_dir) {
      p.report = run_to_directory(p.cfg, *out_dir / (to_string(axis) + "=" + p.value));
    } else {
      p.report = run_scenario(p.cfg);
    }
    combined += metrics_csv_row(p.report, p.cfg, p.value);
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_text_file(*out_dir / "metrics.csv", combined);
  }
  return points;
}

namespace {

// Reference thresholds for the canonical tasks at the default constants.
std::optional<double> reference_dropout(const std::string& task) {
  static const std::map<std::string, double> table{
      {"monitor", 0.208}, {"ship", 0.168}, {"flood", 0.165}, {"fire", 0.163}};
  const auto it = table.find(task);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

}  // namespace

bool DropoutValidation::matches_reference() const {
  std::vector<std::string> expected_order;
  for (const DropoutRow& row : rows) {
    if (!row.reference_soc) continue;
    if (!row.last_execution_soc ||
        std::abs(*row.last_execution_soc - *row.reference_soc) > tolerance) {
      return false;
    }
  }
  std::vector<const DropoutRow*> by_reference;
  for (const DropoutRow& row : rows) {
    if (row.reference_soc) by_reference.push_back(&row);
  }
  std::sort(by_reference.begin(), by_reference.end(), [](const DropoutRow* a, const DropoutRow* b) {
    return *a->reference_soc > *b->reference_soc;
  });
  for (const DropoutRow* row : by_reference) expected_order.push_back(row->task);
  std::vector<std::string> observed;
  for (const std::string& name : dropout_order) {
    if (reference_dropout(name)) observed.push_back(name);
  }
  return observed == expected_order;
}

DropoutValidation validate_dropout(const ScenarioConfig& cfg) {
  cfg.validate();
  const HardwareConfig& hw = cfg.hardware;
  const PricingConfig pricing = cfg.effective_pricing();
  const TaskSet tasks = scale_tasks(cfg.workload.num_tasks);
  const double dt = cfg.timestep_s;

  Image img;
  img.num_tasks = static_cast<std::uint8_t>(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    img.esv[t] = tasks[t].base_prob * tasks[t].accuracy * tasks[t].weight;
    img.best_esv = std::max(img.best_esv, img.esv[t]);
  }

  SatelliteState state;
  state.soc = 0.25;
  state.temperature_c = hw.t_nominal_c;
  StepContext ctx;
  ctx.tasks = &tasks;
  ctx.hw = &hw;
  ctx.pricing = &pricing;
  ctx.dt_s = dt;
  ctx.ttl_s = cfg.ttl_s;
  const ExecutionEnvelope envelope = execution_envelope(hw, dt);
  SchedulerVariant variant;
  variant.pricing = PricingMode::kMultiplicative;
  StepOutcome out;
  std::vector<std::optional<double>> last(tasks.size());
  DropoutValidation v;

  for (std::uint64_t step = 0; step < 1000000 && state.soc > hw.soc_critical; ++step) {
    state.deferred.clear();
    ctx.now_s = static_cast<double>(step) * dt;
    ctx.envelope = envelope;
    ctx.envelope.max_concurrent = floor_limited_concurrency(hw, state.soc, state.temperature_c,
                                                            0.0, dt, envelope.max_concurrent);
    img.id = step;
    img.arrival_s = ctx.now_s;
    schedule_step(state, std::span<const Image>(&img, 1), ctx, variant, out);
    for (const Execution& e : out.executions) {
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        if ((e.tasks >> t) & 1U) last[t] = state.soc;
      }
    }
    const double before = state.soc;
    state.soc = step_battery(hw, state.soc, 0.0, load_power(hw, out.inferences), dt);
    v.max_drain_per_step = std::max(v.max_drain_per_step, before - state.soc);
  }

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    v.rows.push_back({tasks[t].name, img.esv[t], dropout_soc(pricing, img.esv[t]), last[t],
                      reference_dropout(tasks[t].name)});
  }
  std::vector<const DropoutRow*> ordered;
  for (const DropoutRow& row : v.rows) {
    if (row.last_execution_soc) ordered.push_back(&row);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const DropoutRow* a, const DropoutRow* b) {
    return *a->last_execution_soc > *b->last_execution_soc;
  });
  for (const DropoutRow* row : ordered) v.dropout_order.push_back(row->task);
  return v;
}

std::string format_dropout(const DropoutValidation& v) {
  const auto opt = [](const std::optional<double>& x) { return x ? fmt9(*x) : std::string("-"); };
  std::ostringstream s;
  s << std::left << std::setw(10) << "task" << std::right << std::setw(12) << "esv"
    << std::setw(14) << "analytic" << std::setw(14) << "simulated" << std::setw(12)
    << "reference" << std::setw(8) << "ok" << '\n';
  for (const DropoutRow& row : v.rows) {
    std::string ok = "-";
    if (row.reference_soc) {
      ok = row.last_execution_soc &&
                   std::abs(*row.last_execution_soc - *row.reference_soc) <= v.tolerance
               ? "yes"
               : "NO";
    }
    s << std::left << std::setw(10) << row.task << std::right << std::setw(12) << fmt9(row.esv)
      << std::setw(14) << opt(row.analytic_soc) << std::setw(14) << opt(row.last_execution_soc)
      << std::setw(12) << opt(row.reference_soc) << std::setw(8) << ok << '\n';
  }
  s << "dropout order:";
  for (const std::string& name : v.dropout_order) s << ' ' << name;
  s << "\nmax SoC drain per step: " << fmt9(v.max_drain_per_step) << '\n';
  s << "tolerance: " << fmt9(v.tolerance) << '\n';
  s << (v.matches_reference() ? "PASS" : "FAIL") << '\n';
  return s.str();
}

}  // namespace orbsim
