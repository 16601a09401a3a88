#pragma once

#include <initializer_list>

#include "orbsim/hardware.hpp"
#include "orbsim/pricing.hpp"
#include "orbsim/scheduler.hpp"
#include "orbsim/workload.hpp"

namespace orbsim::test {

// Image with explicit per-task values and event bits.
inline Image make_image(std::uint64_t id, double arrival_s, std::initializer_list<double> esv,
                        std::uint32_t events = 0, int origin = 0) {
  Image img;
  img.id = id;
  img.origin = origin;
  img.arrival_s = arrival_s;
  img.events = events;
  std::size_t k = 0;
  for (double v : esv) {
    img.esv[k++] = v;
    img.best_esv = std::max(img.best_esv, v);
  }
  img.num_tasks = static_cast<std::uint8_t>(k);
  return img;
}

// A default-prior image: fire, flood, ship, monitor.
inline Image default_image(std::uint64_t id, double arrival_s = 0.0, std::uint32_t events = 0) {
  return make_image(id, arrival_s, {9.2, 7.44, 5.64, 1.82}, events);
}

inline Image flooded_road_image(std::uint64_t id, double arrival_s = 0.0) {
  return make_image(id, arrival_s, {0.01 * 0.92 * 200.0, 0.90 * 0.93 * 100.0,
                                    0.01 * 0.94 * 50.0, 0.15 * 0.91 * 20.0});
}

struct Fixture {
  TaskSet tasks = canonical_tasks();
  HardwareConfig hw;
  PricingConfig pricing;

  StepContext context(double now_s = 0.0) const {
    StepContext ctx;
    ctx.tasks = &tasks;
    ctx.hw = &hw;
    ctx.pricing = &pricing;
    ctx.now_s = now_s;
    ctx.envelope = execution_envelope(hw, 1.0);
    return ctx;
  }
};

inline Bid make_bid(std::size_t image, std::uint8_t task, double esv, double gflops,
                    std::uint64_t id, double arrival_s = 0.0) {
  return {image, task, esv, gflops, arrival_s, id};
}

}  // namespace orbsim::test
