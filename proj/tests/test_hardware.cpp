#include <doctest.h>

#include <cmath>

#include "orbsim/hardware.hpp"
#include "orbsim/rng.hpp"

using namespace orbsim;

TEST_CASE("solar power") {
  const HardwareConfig hw;
  const Vec3 sun{1.0, 0.0, 0.0};
  CHECK(solar_power(hw, false, {7000.0, 0.0, 0.0}, sun) == 0.0);
  CHECK(solar_power(hw, true, {7000.0, 0.0, 0.0}, sun) == doctest::Approx(120.0));
  const double th = deg_to_rad(60.0);
  CHECK(solar_power(hw, true, {7000.0 * std::cos(th), 7000.0 * std::sin(th), 0.0}, sun) ==
        doctest::Approx(60.0));
}

TEST_CASE("battery step") {
  const HardwareConfig hw;
  CHECK(step_battery(hw, 0.42, 35.0, 35.0, 1.0) == 0.42);
  CHECK(step_battery(hw, 0.50, 120.0, 35.0, 1.0) == doctest::Approx(0.500236111111111).epsilon(1e-14));
  CHECK(step_battery(hw, 0.0001, 0.0, 120.0, 1.0) == 0.0);
  CHECK(step_battery(hw, 0.9999, 120.0, 0.0, 10.0) == 1.0);
}

TEST_CASE("thermal step") {
  const HardwareConfig hw;
  const double t_eq = 30.0 + 0.9 * 35.0 + 8.0;
  CHECK(step_thermal(hw, t_eq, 35.0, true, 1.0) == doctest::Approx(t_eq));
  CHECK(step_thermal(hw, 70.0, 15.0, true, 300.0) == doctest::Approx(51.5));

  SplitMix64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const double t = -20.0 + 120.0 * rng.uniform();
    const double load = 60.0 * rng.uniform();
    const bool sunlit = rng.uniform() < 0.5;
    const double dt = 300.0 * rng.uniform();
    const double eq = 30.0 + 0.9 * load + (sunlit ? 8.0 : 0.0);
    CHECK(std::abs(step_thermal(hw, t, load, sunlit, dt) - eq) <= std::abs(t - eq) + 1e-12);
  }
}

TEST_CASE("thermal calibration points") {
  const HardwareConfig hw;
  // Sunlit idle sits near the nominal temperature, two sunlit inferences near 69.5.
  double idle = hw.t_nominal_c, busy = hw.t_nominal_c;
  for (int i = 0; i < 5000; ++i) {
    idle = step_thermal(hw, idle, load_power(hw, 0), true, 1.0);
    busy = step_thermal(hw, busy, load_power(hw, 2), true, 1.0);
  }
  CHECK(idle == doctest::Approx(51.5).epsilon(1e-6));
  CHECK(busy == doctest::Approx(69.5).epsilon(1e-6));
}

TEST_CASE("execution envelope") {
  HardwareConfig hw;
  const ExecutionEnvelope e = execution_envelope(hw, 1.0);
  CHECK(e.gflops_budget == 2.0);
  CHECK(e.max_concurrent == 4);
  CHECK(static_cast<int>(e.gflops_budget / 1.8) == 1);
  hw.tdp_w = hw.p_idle_w;
  CHECK(execution_envelope(hw, 1.0).max_concurrent == 0);
}

TEST_CASE("floor-limited concurrency") {
  const HardwareConfig hw;
  CHECK(floor_limited_concurrency(hw, 0.9, 50.0, 0.0, 1.0, 4) == 4);
  CHECK(floor_limited_concurrency(hw, 0.9, 85.0, 120.0, 1.0, 4) == 0);
  CHECK(floor_limited_concurrency(hw, 0.15, 50.0, 0.0, 1.0, 4) == 0);
  // Exactly enough margin for two inferences on an idle-drained step.
  const double per_wsec = 1.0 / (100.0 * 3600.0);
  const double soc = 0.15 + 35.0 * per_wsec;
  CHECK(floor_limited_concurrency(hw, soc, 50.0, 0.0, 1.0, 4) == 2);
  CHECK(floor_limited_concurrency(hw, soc, 50.0, 0.0, 1.0, 1) == 1);
}

TEST_CASE("harvest-limited concurrency") {
  const HardwareConfig hw;
  CHECK(harvest_limited_concurrency(hw, 0.0, 4) == 0);
  CHECK(harvest_limited_concurrency(hw, 15.0, 4) == 0);
  CHECK(harvest_limited_concurrency(hw, 34.9, 4) == 1);
  CHECK(harvest_limited_concurrency(hw, 120.0, 4) == 4);
}

TEST_CASE("energy ledger telescopes and SoC stays bounded") {
  const HardwareConfig hw;
  SplitMix64 rng(5);
  EnergyLedger ledger;
  double soc = 0.6;
  const double start = soc;
  for (int i = 0; i < 200000; ++i) {
    const double solar = rng.uniform() < 0.35 ? 0.0 : 120.0 * rng.uniform();
    const double load = load_power(hw, static_cast<int>(rng() % 5));
    const double next = step_battery(hw, soc, solar, load, 1.0);
    CHECK(next >= 0.0);
    CHECK(next <= 1.0);
    ledger.record(hw, soc, next, solar, load, 1.0);
    soc = next;
  }
  CHECK(std::abs(ledger.stored_wh - (soc - start) * hw.battery_capacity_wh) < 1e-6);
  CHECK(std::abs(ledger.net_wh() - ledger.clipped_wh - ledger.stored_wh) < 1e-6);
}

TEST_CASE("hardware validation") {
  HardwareConfig hw;
  CHECK_NOTHROW(hw.validate());
  hw.soc_brownout = 0.1;
  CHECK_THROWS(hw.validate());
}
