#include "orbsim/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace orbsim {
namespace {

using nlohmann::json;

// Reads one JSON object, tracking which keys were consumed so that anything
// left over can be rejected by name.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be a JSON object");
  }

  template <typename T>
  void read(const char* key, T& dst) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      dst = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + qualified(key) + "' has the wrong type");
    }
  }

  template <typename Parse>
  void read_enum(const char* key, Parse parse) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_string()) throw ConfigError("config key '" + qualified(key) + "' must be a string");
    try {
      parse(it->template get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + qualified(key) + "': " + e.what());
    }
  }

  std::optional<ObjectReader> child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return std::nullopt;
    return ObjectReader(*it, qualified(key));
  }

  bool has(const char* key) const { return j_.contains(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (seen_.count(key) == 0) throw ConfigError("unknown config key '" + qualified(key) + "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "config key '" + path_ + "'"; }
  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_constellation(ObjectReader r, ConstellationConfig& c) {
  r.read("num_planes", c.num_planes);
  r.read("sats_per_plane", c.sats_per_plane);
  r.read("altitude_km", c.altitude_km);
  r.read("inclination_deg", c.inclination_deg);
  r.read("phase_jitter", c.phase_jitter);
  r.read("phase_jitter_max_deg", c.phase_jitter_max_deg);
  r.read("altitude_tiers_km", c.altitude_tiers_km);
  r.read("isl_range_km", c.isl_range_km);
  r.read("isl_failure_prob", c.isl_failure_prob);
  r.read("sun_epoch_deg", c.sun_epoch_deg);
  r.finish();
}

void read_hardware(ObjectReader r, HardwareConfig& h) {
  r.read("battery_capacity_wh", h.battery_capacity_wh);
  r.read("solar_peak_w", h.solar_peak_w);
  r.read("p_idle_w", h.p_idle_w);
  r.read("p_task_w", h.p_task_w);
  r.read("tdp_w", h.tdp_w);
  r.read("compute_budget_gflops", h.compute_budget_gflops);
  r.read("soc_critical", h.soc_critical);
  r.read("soc_brownout", h.soc_brownout);
  r.read("soc_safe", h.soc_safe);
  r.read("t_nominal_c", h.t_nominal_c);
  r.read("t_max_c", h.t_max_c);
  r.read("thermal_tau_s", h.thermal_tau_s);
  r.read("t_space_c", h.t_space_c);
  r.read("k_power_c_per_w", h.k_power_c_per_w);
  r.read("k_sun_c", h.k_sun_c);
  r.finish();
}

void read_pricing(ObjectReader r, PricingConfig& p) {
  r.read("p_base", p.p_base);
  r.read("beta", p.beta);
  r.read("gamma_t", p.gamma_t);
  r.read("gamma_q", p.gamma_q);
  r.finish();
}

void read_isl(ObjectReader r, IslConfig& i) {
  r.read("link_cost_fraction", i.link_cost_fraction);
  r.read("latency_penalty", i.latency_penalty);
  r.read("distance_scale_km", i.distance_scale_km);
  r.finish();
}

void read_workload(ObjectReader r, WorkloadConfig& w) {
  r.read("arrival_rate_per_s", w.arrival_rate_per_s);
  r.read("deterministic_arrivals", w.deterministic_arrivals);
  r.read("num_tasks", w.num_tasks);
  r.read_enum("context", [&](const std::string& s) { w.context = parse_context_mode(s); });
  r.read("noise_sigma", w.noise_sigma);
  r.read("category_table", w.category_table);
  r.read("category_weights", w.category_weights);
  r.finish();
}

void read_scheduler(ObjectReader r, ScenarioConfig& cfg) {
  r.read_enum("kind", [&](const std::string& s) { cfg.scheduler = parse_scheduler_kind(s); });
  r.read_enum("pricing_mode",
              [&](const std::string& s) { cfg.variant.pricing = parse_pricing_mode(s); });
  r.read_enum("valuation",
              [&](const std::string& s) { cfg.variant.valuation = parse_valuation_mode(s); });
  r.read("isl", cfg.variant.isl);
  if (auto esa = r.child("esa")) {
    esa->read("v", cfg.esa.v);
    esa->read("theta", cfg.esa.theta);
    esa->read("scale", cfg.esa.scale);
    esa->finish();
  }
  if (auto phoenix = r.child("phoenix")) {
    phoenix->read("inverted_rule", cfg.phoenix.inverted_rule);
    phoenix->read("harvest_limited", cfg.phoenix.harvest_limited);
    phoenix->finish();
  }
  r.finish();
}

void read_relaxations(ObjectReader r, Relaxations& x) {
  r.read("free_isl", x.free_isl);
  r.read("infinite_battery", x.infinite_battery);
  r.read("instant_compute", x.instant_compute);
  r.read("oracle", x.oracle);
  r.finish();
}

void read_output(ObjectReader r, OutputConfig& o) {
  r.read("dir", o.dir);
  r.read("timeseries", o.timeseries);
  r.read("timeseries_interval_s", o.timeseries_interval_s);
  r.read("trace", o.trace);
  r.finish();
}

}  // namespace

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kMarginalCost: return "marginal_cost";
    case SchedulerKind::kStaticFifo: return "static_fifo";
    case SchedulerKind::kPriority: return "priority";
    case SchedulerKind::kEsa: return "esa";
    case SchedulerKind::kPhoenix: return "phoenix";
  }
  return "?";
}

std::string_view to_string(PricingMode mode) {
  switch (mode) {
    case PricingMode::kMultiplicative: return "multiplicative";
    case PricingMode::kBatteryOnly: return "battery_only";
    case PricingMode::kBatteryThermal: return "battery_thermal";
    case PricingMode::kAdditive: return "additive";
  }
  return "?";
}

std::string_view to_string(ContextMode mode) {
  switch (mode) {
    case ContextMode::kFull: return "full";
    case ContextMode::kNone: return "none";
    case ContextMode::kNoisy: return "noisy";
  }
  return "?";
}

std::string_view to_string(ValuationMode mode) {
  return mode == ValuationMode::kUniform ? "uniform" : "contextual";
}

SchedulerKind parse_scheduler_kind(std::string_view text) {
  for (auto k : {SchedulerKind::kMarginalCost, SchedulerKind::kStaticFifo, SchedulerKind::kPriority,
                 SchedulerKind::kEsa, SchedulerKind::kPhoenix}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown scheduler '" + std::string(text) + "'");
}

PricingMode parse_pricing_mode(std::string_view text) {
  for (auto m : {PricingMode::kMultiplicative, PricingMode::kBatteryOnly,
                 PricingMode::kBatteryThermal, PricingMode::kAdditive}) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument("unknown pricing mode '" + std::string(text) + "'");
}

ContextMode parse_context_mode(std::string_view text) {
  for (auto m : {ContextMode::kFull, ContextMode::kNone, ContextMode::kNoisy}) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument("unknown context mode '" + std::string(text) + "'");
}

ValuationMode parse_valuation_mode(std::string_view text) {
  if (text == "contextual") return ValuationMode::kContextual;
  if (text == "uniform") return ValuationMode::kUniform;
  throw std::invalid_argument("unknown valuation '" + std::string(text) + "'");
}

std::uint64_t ScenarioConfig::steps() const {
  return static_cast<std::uint64_t>(std::llround(duration_s / timestep_s));
}

PricingConfig ScenarioConfig::effective_pricing() const {
  PricingConfig p = pricing;
  p.soc_critical = hardware.soc_critical;
  p.t_nominal_c = hardware.t_nominal_c;
  p.t_max_c = hardware.t_max_c;
  return p;
}

void ScenarioConfig::validate() const {
  try {
    if (!(duration_s >= 0.0)) throw std::invalid_argument("duration_s must be non-negative");
    if (!(timestep_s > 0.0)) throw std::invalid_argument("timestep_s must be positive");
    const double ratio = duration_s / timestep_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw std::invalid_argument("duration_s must be a multiple of timestep_s");
    }
    if (!(ttl_s > 0.0)) throw std::invalid_argument("ttl_s must be positive");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    kernels::parse_isa(kernel_isa);
    constellation.validate();
    if (constellation.total() > 4096) throw std::invalid_argument("at most 4096 satellites");
    hardware.validate();
    effective_pricing().validate();
    isl.validate();
    workload.validate();
    esa.validate();
    if (!(output.timeseries_interval_s > 0.0)) {
      throw std::invalid_argument("output.timeseries_interval_s must be positive");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ScenarioConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader r(root, "");
  if (!r.has("seed")) throw ConfigError("config key 'seed' is required");
  ScenarioConfig cfg;
  r.read("seed", cfg.seed);
  r.read("name", cfg.name);
  r.read("duration_s", cfg.duration_s);
  r.read("timestep_s", cfg.timestep_s);
  r.read("ttl_s", cfg.ttl_s);
  r.read("threads", cfg.threads);
  r.read("kernel_isa", cfg.kernel_isa);
  if (auto c = r.child("constellation")) read_constellation(*c, cfg.constellation);
  if (auto c = r.child("hardware")) read_hardware(*c, cfg.hardware);
  if (auto c = r.child("pricing")) read_pricing(*c, cfg.pricing);
  if (auto c = r.child("isl")) read_isl(*c, cfg.isl);
  if (auto c = r.child("workload")) read_workload(*c, cfg.workload);
  if (auto c = r.child("scheduler")) read_scheduler(*c, cfg);
  if (auto c = r.child("relaxations")) read_relaxations(*c, cfg.relaxations);
  if (auto c = r.child("output")) read_output(*c, cfg.output);
  r.finish();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const ScenarioConfig& cfg) {
  const auto& c = cfg.constellation;
  const auto& h = cfg.hardware;
  const auto& w = cfg.workload;
  json j;
  j["seed"] = cfg.seed;
  j["name"] = cfg.name;
  j["duration_s"] = cfg.duration_s;
  j["timestep_s"] = cfg.timestep_s;
  j["ttl_s"] = cfg.ttl_s;
  j["threads"] = cfg.threads;
  j["kernel_isa"] = cfg.kernel_isa;
  j["constellation"] = {{"num_planes", c.num_planes},
                        {"sats_per_plane", c.sats_per_plane},
                        {"altitude_km", c.altitude_km},
                        {"inclination_deg", c.inclination_deg},
                        {"phase_jitter", c.phase_jitter},
                        {"phase_jitter_max_deg", c.phase_jitter_max_deg},
                        {"altitude_tiers_km", c.altitude_tiers_km},
                        {"isl_range_km", c.isl_range_km},
                        {"isl_failure_prob", c.isl_failure_prob},
                        {"sun_epoch_deg", c.sun_epoch_deg}};
  j["hardware"] = {{"battery_capacity_wh", h.battery_capacity_wh},
                   {"solar_peak_w", h.solar_peak_w},
                   {"p_idle_w", h.p_idle_w},
                   {"p_task_w", h.p_task_w},
                   {"tdp_w", h.tdp_w},
                   {"compute_budget_gflops", h.compute_budget_gflops},
                   {"soc_critical", h.soc_critical},
                   {"soc_brownout", h.soc_brownout},
                   {"soc_safe", h.soc_safe},
                   {"t_nominal_c", h.t_nominal_c},
                   {"t_max_c", h.t_max_c},
                   {"thermal_tau_s", h.thermal_tau_s},
                   {"t_space_c", h.t_space_c},
                   {"k_power_c_per_w", h.k_power_c_per_w},
                   {"k_sun_c", h.k_sun_c}};
  j["pricing"] = {{"p_base", cfg.pricing.p_base},
                  {"beta", cfg.pricing.beta},
                  {"gamma_t", cfg.pricing.gamma_t},
                  {"gamma_q", cfg.pricing.gamma_q}};
  j["isl"] = {{"link_cost_fraction", cfg.isl.link_cost_fraction},
              {"latency_penalty", cfg.isl.latency_penalty},
              {"distance_scale_km", cfg.isl.distance_scale_km}};
  j["workload"] = {{"arrival_rate_per_s", w.arrival_rate_per_s},
                   {"deterministic_arrivals", w.deterministic_arrivals},
                   {"num_tasks", w.num_tasks},
                   {"context", to_string(w.context)},
                   {"noise_sigma", w.noise_sigma},
                   {"category_table", w.category_table},
                   {"category_weights", w.category_weights}};
  j["scheduler"] = {{"kind", to_string(cfg.scheduler)},
                    {"pricing_mode", to_string(cfg.variant.pricing)},
                    {"valuation", to_string(cfg.variant.valuation)},
                    {"isl", cfg.variant.isl},
                    {"esa", {{"v", cfg.esa.v}, {"theta", cfg.esa.theta}, {"scale", cfg.esa.scale}}},
                    {"phoenix",
                     {{"inverted_rule", cfg.phoenix.inverted_rule},
                      {"harvest_limited", cfg.phoenix.harvest_limited}}}};
  j["relaxations"] = {{"free_isl", cfg.relaxations.free_isl},
                      {"infinite_battery", cfg.relaxations.infinite_battery},
                      {"instant_compute", cfg.relaxations.instant_compute},
                      {"oracle", cfg.relaxations.oracle}};
  j["output"] = {{"dir", cfg.output.dir},
                 {"timeseries", cfg.output.timeseries},
                 {"timeseries_interval_s", cfg.output.timeseries_interval_s},
                 {"trace", cfg.output.trace}};
  return j.dump(2) + "\n";
}

}  // namespace orbsim
