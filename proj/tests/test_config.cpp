#include <doctest.h>

#include <string>

#include "orbsim/config.hpp"

using namespace orbsim;

TEST_CASE("defaults from an almost empty object") {
  const ScenarioConfig cfg = parse_config(R"({"seed": 7})");
  CHECK(cfg.seed == 7);
  CHECK(cfg.duration_s == 259200.0);
  CHECK(cfg.scheduler == SchedulerKind::kMarginalCost);
  CHECK(cfg.constellation.total() == 143);
  CHECK(cfg.steps() == 259200);
  ScenarioConfig expected;
  expected.seed = 7;
  CHECK(cfg == expected);
}

TEST_CASE("seed is mandatory") {
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);
}

TEST_CASE("unknown keys are named") {
  try {
    parse_config(R"({"seed": 1, "foo": 3})");
    FAIL("accepted an unknown key");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  try {
    parse_config(R"({"seed": 1, "hardware": {"battery_wh": 3}})");
    FAIL("accepted an unknown nested key");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("hardware.battery_wh") != std::string::npos);
  }
}

TEST_CASE("malformed and out-of-range input") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "duration_s": "long"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "scheduler": {"kind": "magic"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "workload": {"num_tasks": 40}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "timestep_s": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "constellation": {"isl_failure_prob": 1.5}})"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("emit and parse round-trip") {
  ScenarioConfig cfg;
  cfg.seed = 99;
  cfg.name = "trip";
  cfg.duration_s = 1234.0;
  cfg.threads = 3;
  cfg.scheduler = SchedulerKind::kPhoenix;
  cfg.phoenix.inverted_rule = true;
  cfg.esa.scale = 0.25;
  cfg.variant.pricing = PricingMode::kAdditive;
  cfg.variant.valuation = ValuationMode::kUniform;
  cfg.variant.isl = false;
  cfg.pricing.beta = 0.0042;
  cfg.constellation.altitude_tiers_km = {450.0, 550.0};
  cfg.constellation.phase_jitter = true;
  cfg.workload.context = ContextMode::kNone;
  cfg.workload.num_tasks = 8;
  cfg.relaxations.infinite_battery = true;
  cfg.isl.distance_scale_km = 2500.0;
  cfg.output.trace = true;
  const ScenarioConfig back = parse_config(emit_config(cfg));
  CHECK(back == cfg);
  CHECK(emit_config(back) == emit_config(cfg));
  const ScenarioConfig defaults = parse_config(R"({"seed": 0})");
  CHECK(parse_config(emit_config(defaults)) == defaults);
}

TEST_CASE("pricing thresholds follow the hardware") {
  ScenarioConfig cfg = parse_config(R"({"seed": 1, "hardware": {"soc_critical": 0.1}})");
  CHECK(cfg.effective_pricing().soc_critical == 0.1);
  CHECK(cfg.effective_pricing().t_max_c == cfg.hardware.t_max_c);
}

TEST_CASE("enum names") {
  for (auto k : {SchedulerKind::kMarginalCost, SchedulerKind::kStaticFifo, SchedulerKind::kPriority,
                 SchedulerKind::kEsa, SchedulerKind::kPhoenix}) {
    CHECK(parse_scheduler_kind(to_string(k)) == k);
  }
  for (auto m : {PricingMode::kMultiplicative, PricingMode::kBatteryOnly,
                 PricingMode::kBatteryThermal, PricingMode::kAdditive}) {
    CHECK(parse_pricing_mode(to_string(m)) == m);
  }
  for (auto m : {ContextMode::kFull, ContextMode::kNone, ContextMode::kNoisy}) {
    CHECK(parse_context_mode(to_string(m)) == m);
  }
  CHECK(parse_valuation_mode(to_string(ValuationMode::kUniform)) == ValuationMode::kUniform);
}
