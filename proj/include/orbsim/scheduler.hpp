#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orbsim/deferred_queue.hpp"
#include "orbsim/hardware.hpp"
#include "orbsim/pricing.hpp"
#include "orbsim/workload.hpp"

namespace orbsim {

// One (task, image) pair competing for this step's compute. `gflops` is the
// image's pass cost; heads on the same image share it.
struct Bid {
  std::size_t image;  // index into the caller's image list
  std::uint8_t task;
  double esv;
  double gflops;
  double arrival_s;
  std::uint64_t image_id;
};

struct ClearingResult {
  std::vector<std::size_t> winners;  // indices into the bid list, in acceptance order
  std::vector<std::size_t> losers;
  double gflops_used = 0.0;
  int concurrency_used = 0;
};

// Accepts bids in value-density order (ties: value, arrival, image id, task)
// while the compute budget and concurrency slots allow. An image's pass cost
// is charged once, on its first accepted head.
ClearingResult greedy_select(std::span<const Bid> bids, double gflops_budget, int max_concurrent);

// Exact 0/1 knapsack optimum with demands quantised to 0.1 GFLOPs. Each bid is
// its own item. Test oracle; at most 20 bids.
double dp_select(std::span<const Bid> bids, double gflops_budget);

double clearing_value(std::span<const Bid> bids, const ClearingResult& result);

struct SchedulerVariant {
  PricingMode pricing = PricingMode::kMultiplicative;
  ValuationMode valuation = ValuationMode::kContextual;
  bool isl = true;

  bool operator==(const SchedulerVariant&) const = default;
};

struct SatelliteState {
  int id = 0;
  double soc = 1.0;
  double temperature_c = 50.0;
  DeferredQueue deferred;
  // FIFO schedulers: an image whose heads did not all fit in one step.
  std::optional<Image> in_progress;
  std::uint32_t in_progress_done = 0;
  // ESA virtual backlog.
  double esa_backlog = 0.0;
};

struct Execution {
  Image image;
  std::uint32_t tasks = 0;  // bit k: head k ran this step
  int executor = 0;
  // False when a carried image resumes; counts an image once.
  bool first_pass = true;
};

struct RoutedImage {
  Image image;
  int destination;
};

struct StepContext {
  const TaskSet* tasks = nullptr;
  const HardwareConfig* hw = nullptr;
  const PricingConfig* pricing = nullptr;
  double now_s = 0.0;
  double dt_s = 1.0;
  double ttl_s = 300.0;
  // Envelope after floor and throttle limits.
  ExecutionEnvelope envelope{2.0, 4};
  bool instant_compute = false;
  bool uniform_compute = true;
  bool sunlit = true;
  double p_solar_w = 0.0;
  // Seconds until this satellite leaves the shadow; zero when sunlit.
  double eclipse_exit_s = 0.0;
};

struct StepOutcome {
  MarginalCost price;
  MarginalCost physical;
  int inferences = 0;
  std::size_t bids = 0;
  std::size_t expired = 0;
  std::size_t deferred_fresh = 0;
  std::size_t dropped = 0;
  std::vector<Execution> executions;
  // Fresh images that bid and lost; they are also in the deferred queue.
  std::vector<Image> isl_candidates;
  // Baselines that route by rule rather than by cost fill this instead.
  std::vector<RoutedImage> offload_requests;

  void reset();
};

// Deferred images whose best value clears `price`, best first, after dropping
// expired entries.
std::vector<Image> retry_deferred(SatelliteState& state, const MarginalCost& price, double now_s,
                                  std::size_t* expired = nullptr);

// One bid per (task, image) whose value clears `price`.
void collect_bids(std::span<const Image> images, const TaskSet& tasks, const MarginalCost& price,
                  bool instant_compute, std::vector<Bid>& out);

// One marginal-cost scheduling step: price, retry, bid, clear, execute, defer.
void schedule_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                   const SchedulerVariant& variant, StepOutcome& out);

// Same step, but bids over every eligible image and clears with the reference
// sort. Used to check the candidate-pruned path in schedule_step.
void schedule_step_reference(SatelliteState& state, std::span<const Image> fresh,
                             const StepContext& ctx, const SchedulerVariant& variant,
                             StepOutcome& out);

}  // namespace orbsim
