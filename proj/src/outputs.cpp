#include "orbsim/outputs.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "orbsim/format.hpp"

namespace orbsim {

std::string fmt9(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double round9(double value) { return std::strtod(fmt9(value).c_str(), nullptr); }

namespace {

using nlohmann::ordered_json;

struct Column {
  const char* name;
  double (*get)(const MetricsReport&);
};

// Columns of metrics.csv, in order.
const std::vector<Column>& columns() {
  static const std::vector<Column> cols{
      {"hours", [](const MetricsReport& r) { return r.hours; }},
      {"satellites", [](const MetricsReport& r) { return double(r.satellites); }},
      {"scientific_value", [](const MetricsReport& r) { return r.scientific_value; }},
      {"goodput_m_sv_per_hr", [](const MetricsReport& r) { return r.goodput_sv_per_hr / 1e6; }},
      {"throughput_k_images_per_hr",
       [](const MetricsReport& r) { return r.throughput_images_per_hr / 1e3; }},
      {"execution_rate_pct", [](const MetricsReport& r) { return r.execution_rate_pct; }},
      {"head_execution_rate_pct", [](const MetricsReport& r) { return r.head_execution_rate_pct; }},
      {"coverage_pct", [](const MetricsReport& r) { return r.coverage_pct; }},
      {"mean_soc", [](const MetricsReport& r) { return r.mean_soc; }},
      {"reserve_pct", [](const MetricsReport& r) { return r.reserve_pct; }},
      {"brownout_pct", [](const MetricsReport& r) { return r.brownout_pct; }},
      {"load_balance_pct", [](const MetricsReport& r) { return r.load_balance_pct; }},
      {"mean_temperature_c", [](const MetricsReport& r) { return r.mean_temperature_c; }},
      {"peak_temperature_c", [](const MetricsReport& r) { return r.peak_temperature_c; }},
      {"mean_inactivity", [](const MetricsReport& r) { return r.mean_inactivity; }},
      {"offloads", [](const MetricsReport& r) { return double(r.offloads); }},
      {"expired", [](const MetricsReport& r) { return double(r.expired); }},
      {"arrivals", [](const MetricsReport& r) { return double(r.arrivals); }},
      {"executed_images", [](const MetricsReport& r) { return double(r.executed_images); }},
      {"eclipse_fraction", [](const MetricsReport& r) { return r.eclipse_fraction; }},
      {"mean_isl_degree", [](const MetricsReport& r) { return r.mean_isl_degree; }},
      {"energy_residual_wh", [](const MetricsReport& r) { return r.energy_residual_wh; }},
  };
  return cols;
}

ordered_json task_json(const TaskReport& t) {
  ordered_json j;
  j["name"] = t.name;
  j["executions"] = t.executions;
  j["detections"] = t.detections;
  j["recall_weighted_detections"] = round9(t.recall_weighted_detections);
  j["generated_events"] = t.generated_events;
  j["offloaded"] = t.offloaded;
  if (t.precision_pct) {
    j["precision_pct"] = round9(*t.precision_pct);
  } else {
    j["precision_pct"] = nullptr;
  }
  return j;
}

std::vector<double> rounded(const std::vector<double>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(round9(v));
  return out;
}

}  // namespace

std::string report_json(const MetricsReport& r, const ScenarioConfig& cfg) {
  ordered_json j;
  j["name"] = cfg.name;
  j["scheduler"] = to_string(cfg.scheduler);
  j["seed"] = cfg.seed;
  for (const Column& c : columns()) j[c.name] = round9(c.get(r));
  j["goodput_sv_per_hr"] = round9(r.goodput_sv_per_hr);
  j["throughput_images_per_hr"] = round9(r.throughput_images_per_hr);
  j["executed_heads"] = r.executed_heads;
  j["dropped"] = r.dropped;
  j["min_soc"] = round9(r.min_soc);
  j["max_soc"] = round9(r.max_soc);
  j["harvested_wh"] = round9(r.harvested_wh);
  j["consumed_wh"] = round9(r.consumed_wh);
  j["clipped_wh"] = round9(r.clipped_wh);
  j["below_floor_steps"] = r.idle_below_floor_steps;
  ordered_json tasks = ordered_json::array();
  for (const TaskReport& t : r.tasks) tasks.push_back(task_json(t));
  j["tasks"] = tasks;
  j["inactivity_by_satellite"] = rounded(r.inactivity_by_satellite);
  j["sv_by_satellite"] = rounded(r.sv_by_satellite);
  return j.dump(2) + "\n";
}

std::string summary_text(const MetricsReport& r, const ScenarioConfig& cfg) {
  std::ostringstream s;
  const auto line = [&](const std::string& label, const std::string& value) {
    s << std::left << std::setw(30) << label << value << '\n';
  };
  line("scenario", cfg.name);
  line("scheduler", std::string(to_string(cfg.scheduler)));
  line("seed", std::to_string(cfg.seed));
  line("satellites", std::to_string(r.satellites));
  line("simulated hours", fmt9(r.hours));
  line("scientific value", fmt9(r.scientific_value));
  line("goodput (M SV/hr)", fmt9(r.goodput_sv_per_hr / 1e6));
  line("throughput (K images/hr)", fmt9(r.throughput_images_per_hr / 1e3));
  line("execution rate (%)", fmt9(r.execution_rate_pct));
  line("event coverage (%)", fmt9(r.coverage_pct));
  line("mean battery", fmt9(r.mean_soc));
  line("battery reserve time (%)", fmt9(r.reserve_pct));
  line("brownout risk (%)", fmt9(r.brownout_pct));
  line("science load balance (%)", fmt9(r.load_balance_pct));
  line("mean temperature (C)", fmt9(r.mean_temperature_c));
  line("peak temperature (C)", fmt9(r.peak_temperature_c));
  line("mean inactive windows", fmt9(r.mean_inactivity));
  line("offloads", std::to_string(r.offloads));
  line("expired deferrals", std::to_string(r.expired));
  if (r.idle_below_floor_steps > 0) {
    line("steps ending below floor", std::to_string(r.idle_below_floor_steps));
  }
  s << '\n'
    << std::left << std::setw(12) << "task" << std::right << std::setw(14) << "executions"
    << std::setw(14) << "detections" << std::setw(14) << "precision%" << std::setw(12)
    << "offloaded" << '\n';
  for (const TaskReport& t : r.tasks) {
    s << std::left << std::setw(12) << t.name << std::right << std::setw(14) << t.executions
      << std::setw(14) << t.detections << std::setw(14)
      << (t.precision_pct ? fmt9(*t.precision_pct) : std::string("-")) << std::setw(12)
      << t.offloaded << '\n';
  }
  return s.str();
}

std::string metrics_csv_header(const std::string& key_column) {
  std::string out = key_column.empty() ? "" : key_column + ",";
  out += "name,scheduler,seed";
  for (const Column& c : columns()) out += std::string(",") + c.name;
  return out + "\n";
}

std::string metrics_csv_row(const MetricsReport& r, const ScenarioConfig& cfg,
                            const std::string& key) {
  std::string out = key.empty() ? "" : key + ",";
  out += cfg.name + "," + std::string(to_string(cfg.scheduler)) + "," + std::to_string(cfg.seed);
  for (const Column& c : columns()) out += "," + fmt9(c.get(r));
  return out + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void emit_outputs(const MetricsReport& report, const ScenarioConfig& cfg,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "config.json", emit_config(cfg));
  write_text_file(dir / "report.json", report_json(report, cfg));
  write_text_file(dir / "summary.txt", summary_text(report, cfg));
  write_text_file(dir / "metrics.csv", metrics_csv_header() + metrics_csv_row(report, cfg));
}

}  // namespace orbsim
