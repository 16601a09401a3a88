#include "orbsim/baselines.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace orbsim {
namespace {

constexpr double kBudgetSlack = 1e-9;

std::uint32_t all_heads(const Image& img) {
  return img.num_tasks >= 32 ? ~0U : (1U << img.num_tasks) - 1U;
}

struct Budget {
  double gflops;
  int slots;
};

double pass_cost(std::uint32_t heads, const StepContext& ctx) {
  if (ctx.instant_compute) return 0.0;
  double g = 0.0;
  for (std::size_t t = 0; t < ctx.tasks->size(); ++t) {
    if ((heads >> t) & 1U) g = std::max(g, (*ctx.tasks)[t].gflops);
  }
  return g;
}

// Runs as many pending heads of `img` as the slots allow, lowest index first.
// Returns the heads that ran; zero if the pass does not fit.
std::uint32_t run_heads(std::uint32_t pending, Budget& budget, const StepContext& ctx) {
  if (pending == 0 || budget.slots <= 0) return 0;
  std::uint32_t ran = 0;
  int count = 0;
  for (std::uint32_t rest = pending; rest != 0 && count < budget.slots; rest &= rest - 1) {
    ran |= rest & (~rest + 1U);
    ++count;
  }
  const double g = pass_cost(ran, ctx);
  if (g > budget.gflops + kBudgetSlack) return 0;
  budget.gflops -= g;
  budget.slots -= count;
  return ran;
}

void record(const SatelliteState& state, const Image& img, std::uint32_t ran, StepOutcome& out,
            bool first_pass = true) {
  out.executions.push_back({img, ran, state.id, first_pass});
  out.inferences += std::popcount(ran);
}

// Continues the carried image. Returns false if it still occupies the pipeline.
bool resume_in_progress(SatelliteState& state, Budget& budget, const StepContext& ctx,
                        StepOutcome& out) {
  if (!state.in_progress) return true;
  const Image& img = *state.in_progress;
  const std::uint32_t ran = run_heads(all_heads(img) & ~state.in_progress_done, budget, ctx);
  if (ran != 0) {
    record(state, img, ran, out, false);
    state.in_progress_done |= ran;
  }
  if ((state.in_progress_done & all_heads(img)) == all_heads(img)) {
    state.in_progress.reset();
    state.in_progress_done = 0;
    return true;
  }
  return false;
}

// Starts `img`; a partial pass becomes the carried image. Returns false once
// nothing else can start this step.
bool start_image(SatelliteState& state, const Image& img, Budget& budget, const StepContext& ctx,
                 StepOutcome& out, bool* started) {
  const std::uint32_t ran = run_heads(all_heads(img), budget, ctx);
  *started = ran != 0;
  if (ran == 0) return false;
  record(state, img, ran, out);
  if (ran != all_heads(img)) {
    state.in_progress = img;
    state.in_progress_done = ran;
    return false;
  }
  return budget.slots > 0;
}

Budget budget_of(const StepContext& ctx) {
  return {ctx.envelope.gflops_budget, ctx.envelope.max_concurrent};
}

// FIFO over fresh arrivals; anything that does not start is dropped.
void fifo_fresh(SatelliteState& state, std::span<const Image> fresh, Budget& budget,
                const StepContext& ctx, StepOutcome& out, bool open) {
  for (const Image& img : fresh) {
    bool started = false;
    if (open) open = start_image(state, img, budget, ctx, out, &started);
    if (!started) ++out.dropped;
  }
}

}  // namespace

void EsaConfig::validate() const {
  if (!(v > 0.0)) throw std::invalid_argument("scheduler.esa.v must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("scheduler.esa.theta must lie in (0, 1)");
  if (!(scale >= 0.0)) throw std::invalid_argument("scheduler.esa.scale must be non-negative");
}

void static_fifo_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                      StepOutcome& out) {
  out.reset();
  Budget budget = budget_of(ctx);
  const bool open = resume_in_progress(state, budget, ctx, out) && budget.slots > 0;
  fifo_fresh(state, fresh, budget, ctx, out, open);
}

void priority_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                   StepOutcome& out) {
  out.reset();
  const bool guarded = state.soc < ctx.hw->soc_brownout;
  std::vector<Bid> bids;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    for (std::size_t t = 0; t < fresh[i].num_tasks; ++t) {
      const Task& task = (*ctx.tasks)[t];
      if (guarded && task.weight < 100.0) continue;
      bids.push_back({i, static_cast<std::uint8_t>(t), fresh[i].esv[t],
                      ctx.instant_compute ? 0.0 : task.gflops, fresh[i].arrival_s, fresh[i].id});
    }
  }
  out.bids = bids.size();
  const ClearingResult clearing =
      greedy_select(bids, ctx.envelope.gflops_budget, ctx.envelope.max_concurrent);
  std::vector<std::uint32_t> masks(fresh.size(), 0);
  for (std::size_t w : clearing.winners) masks[bids[w].image] |= 1U << bids[w].task;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (masks[i] != 0) {
      record(state, fresh[i], masks[i], out);
    } else {
      ++out.dropped;
    }
  }
}

void esa_step(SatelliteState& state, const EsaConfig& esa, std::span<const Image> fresh,
              const StepContext& ctx, StepOutcome& out) {
  out.reset();
  const double energy_units = ctx.dt_s;
  Budget budget = budget_of(ctx);
  bool open = budget.slots > 0;
  for (const Image& img : fresh) {
    std::uint32_t admitted = 0;
    for (std::size_t t = 0; t < img.num_tasks; ++t) {
      if (esa.v * img.esv[t] >= state.esa_backlog * energy_units) admitted |= 1U << t;
    }
    out.bids += static_cast<std::size_t>(std::popcount(admitted));
    std::uint32_t ran = 0;
    if (open && admitted != 0) {
      ran = run_heads(admitted, budget, ctx);
      if (ran == 0) open = false;
    }
    if (ran != 0) {
      record(state, img, ran, out);
      if (budget.slots <= 0) open = false;
    } else {
      ++out.dropped;
    }
  }
  state.esa_backlog = std::max(0.0, state.esa_backlog + (esa.theta - state.soc) * esa.scale);
}

void phoenix_step(SatelliteState& state, const PhoenixConfig& phoenix,
                  std::span<const Image> fresh, std::span<const NeighborView> neighbors,
                  const StepContext& ctx, StepOutcome& out) {
  out.reset();
  out.expired = state.deferred.expire(ctx.now_s);
  if (ctx.sunlit) {
    Budget budget = budget_of(ctx);
    if (phoenix.harvest_limited) {
      budget.slots = std::min(
          budget.slots, harvest_limited_concurrency(*ctx.hw, ctx.p_solar_w, budget.slots));
    }
    bool open = resume_in_progress(state, budget, ctx, out) && budget.slots > 0;
    std::vector<std::uint64_t> finished;
    state.deferred.for_each_in_order([&](const DeferredQueue::Entry& e) {
      if (!open) return false;
      bool started = false;
      open = start_image(state, e.image, budget, ctx, out, &started);
      if (started) finished.push_back(e.image.id);
      return open;
    });
    for (std::uint64_t id : finished) state.deferred.erase(id);
    fifo_fresh(state, fresh, budget, ctx, out, open);
    return;
  }
  const NeighborView* target = nullptr;
  for (const NeighborView& n : neighbors) {
    if (!n.state.sunlit) continue;
    if (target == nullptr || n.state.soc > target->state.soc) target = &n;
  }
  for (const Image& img : fresh) {
    bool offload = !(ctx.ttl_s < ctx.eclipse_exit_s);
    if (phoenix.inverted_rule) offload = !offload;
    if (offload && target != nullptr && !img.offloaded) {
      out.offload_requests.push_back({img, target->id});
    } else {
      state.deferred.push(img, ctx.now_s + ctx.ttl_s);
      ++out.deferred_fresh;
    }
  }
}

void exhaustive_step(SatelliteState& state, std::span<const Image> fresh, const StepContext&,
                     StepOutcome& out) {
  out.reset();
  for (const Image& img : fresh) {
    if (img.num_tasks > 0) record(state, img, all_heads(img), out);
  }
}

}  // namespace orbsim
