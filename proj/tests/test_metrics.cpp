#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "orbsim/metrics.hpp"
#include "orbsim/rng.hpp"

using namespace orbsim;

namespace {

// 100 (1 - G) with G from the sorted-rank formula.
double rank_formula_balance(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  double weighted = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * v[i];
  }
  return 100.0 * (1.0 - weighted / (n * total));
}

}  // namespace

TEST_CASE("scientific value") {
  const TaskSet tasks = canonical_tasks();
  const Execution fire{test::default_image(1, 0.0, 0b0001), 0b0001, 0, true};
  CHECK(scientific_value(fire, tasks) == 200.0);
  const Execution quiet{test::default_image(2, 0.0, 0), 0xF, 0, true};
  CHECK(scientific_value(quiet, tasks) == 0.0);
  const Execution both{test::default_image(3, 0.0, 0b1010), 0xF, 0, true};
  CHECK(scientific_value(both, tasks) == 120.0);
  // Missed heads earn nothing even with the event present.
  const Execution partial{test::default_image(4, 0.0, 0b1010), 0b0010, 0, true};
  CHECK(scientific_value(partial, tasks) == 100.0);
  const std::vector<Execution> all{fire, quiet, both, partial};
  CHECK(scientific_value(all, tasks) == 420.0);
}

TEST_CASE("load balance") {
  const std::vector<double> equal{3.0, 3.0, 3.0, 3.0};
  CHECK(load_balance(equal) == 100.0);
  const std::vector<double> holder{5.0, 0.0};
  CHECK(load_balance(holder) == 50.0);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(load_balance(zero) == 100.0);
}

TEST_CASE("load balance matches the rank formula") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng() % 200);
    for (double& x : v) x = rng.uniform() < 0.1 ? 0.0 : 1000.0 * rng.uniform();
    if (std::accumulate(v.begin(), v.end(), 0.0) == 0.0) v[0] = 1.0;
    const double got = load_balance(v);
    CHECK(std::abs(got - rank_formula_balance(v)) < 1e-9);
    CHECK(got >= 0.0);
    CHECK(got <= 100.0);
  }
}

TEST_CASE("transfers toward the richer satellite lower the balance") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(2 + rng() % 20);
    for (double& x : v) x = 1.0 + 100.0 * rng.uniform();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) continue;
    const double before = load_balance(v);
    const double amount = 0.5 * *lo * rng.uniform() + 1e-6;
    *lo -= amount;
    *hi += amount;
    CHECK(load_balance(v) < before);
  }
}

TEST_CASE("operational health") {
  const std::vector<double> steady(100, 0.50);
  const OperationalHealth a = operational_health(steady, 0.35, 0.20);
  CHECK(a.mean_soc == doctest::Approx(0.50));
  CHECK(a.reserve_pct == 100.0);
  CHECK(a.brownout_pct == 0.0);
  const std::vector<double> low(100, 0.18);
  const OperationalHealth b = operational_health(low, 0.35, 0.20);
  CHECK(b.mean_soc == doctest::Approx(0.18));
  CHECK(b.reserve_pct == 0.0);
  CHECK(b.brownout_pct == 100.0);
  std::vector<double> split(50, 0.40);
  split.insert(split.end(), 50, 0.19);
  const OperationalHealth c = operational_health(split, 0.35, 0.20);
  CHECK(c.mean_soc == doctest::Approx(0.295));
  CHECK(c.reserve_pct == 50.0);
  CHECK(c.brownout_pct == 50.0);
}

TEST_CASE("inactivity") {
  const std::vector<std::uint32_t> busy(10, 3), idle(10, 0);
  std::vector<std::uint32_t> alternating;
  for (int i = 0; i < 10; ++i) alternating.push_back(i % 2 == 0 ? 1 : 0);
  CHECK(inactivity_fraction(busy) == 0.0);
  CHECK(inactivity_fraction(idle) == 1.0);
  CHECK(inactivity_fraction(alternating) == 0.5);
}

TEST_CASE("fleet credit goes to the origin satellite") {
  const TaskSet tasks = canonical_tasks();
  const HardwareConfig hw;
  std::vector<SatelliteTally> sats(3);
  FleetTally fleet(tasks);
  Execution e{test::default_image(1, 0.0, 0b0011), 0xF, 2, true};
  e.image.origin = 0;
  fleet.credit(e, tasks, sats);
  Execution f2{test::default_image(2, 0.0, 0b0001), 0b0001, 1, true};
  f2.image.origin = 1;
  fleet.credit(f2, tasks, sats);
  CHECK(sats[0].sv_credited == 300.0);
  CHECK(sats[1].sv_credited == 200.0);
  CHECK(sats[2].sv_credited == 0.0);
  for (auto& s : sats) s.sample_state(0.5, 50.0, hw);
  std::vector<SatelliteState> states(3);
  const MetricsReport r = build_report(sats, fleet, states, hw, 3600.0);
  CHECK(r.scientific_value == 500.0);
  CHECK(r.goodput_sv_per_hr == 500.0);
  CHECK(r.tasks[0].detections == 2);
}

TEST_CASE("coverage extremes") {
  const TaskSet tasks = canonical_tasks();
  const HardwareConfig hw;
  std::vector<SatelliteState> states(1);
  SUBCASE("nothing processed") {
    std::vector<SatelliteTally> sats(1);
    sats[0].generated_events.assign(tasks.size(), 5);
    sats[0].window_executions.assign(4, 0);
    FleetTally fleet(tasks);
    const MetricsReport r = build_report(sats, fleet, states, hw, 60.0);
    CHECK(r.coverage_pct == 0.0);
    CHECK(r.mean_inactivity == 1.0);
  }
  SUBCASE("everything processed") {
    std::vector<SatelliteTally> sats(1);
    FleetTally fleet(tasks);
    sats[0].generated_events.assign(tasks.size(), 0);
    sats[0].window_executions.assign(4, 1);
    for (std::uint64_t id = 0; id < 10; ++id) {
      const Execution e{test::default_image(id, 0.0, 0xF), 0xF, 0, true};
      for (std::size_t t = 0; t < 4; ++t) ++sats[0].generated_events[t];
      fleet.credit(e, tasks, sats);
    }
    const MetricsReport r = build_report(sats, fleet, states, hw, 60.0);
    CHECK(r.coverage_pct == doctest::Approx(100.0));
    CHECK(r.mean_inactivity == 0.0);
  }
}
