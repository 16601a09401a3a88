#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "orbsim/config.hpp"
#include "orbsim/metrics.hpp"

namespace orbsim {

std::string report_json(const MetricsReport& report, const ScenarioConfig& cfg);
std::string summary_text(const MetricsReport& report, const ScenarioConfig& cfg);

// One CSV row per scenario. `key_column` names an optional leading column.
std::string metrics_csv_header(const std::string& key_column = "");
std::string metrics_csv_row(const MetricsReport& report, const ScenarioConfig& cfg,
                            const std::string& key = "");

// Writes config.json, report.json, summary.txt and metrics.csv into `dir`.
void emit_outputs(const MetricsReport& report, const ScenarioConfig& cfg,
                  const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace orbsim
