#include "orbsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace orbsim {
namespace {

constexpr double kBudgetSlack = 1e-9;

double density(const Bid& b) {
  return b.gflops > 0.0 ? b.esv / b.gflops : std::numeric_limits<double>::infinity();
}

bool clears_before(const Bid& a, const Bid& b) {
  const double da = density(a), db = density(b);
  if (da != db) return da > db;
  if (a.esv != b.esv) return a.esv > b.esv;
  if (a.arrival_s != b.arrival_s) return a.arrival_s < b.arrival_s;
  if (a.image_id != b.image_id) return a.image_id < b.image_id;
  return a.task < b.task;
}

// Shared tail of both step paths: record executions, retire executed
// deferred images, defer fresh images that did not run.
void settle(SatelliteState& state, std::span<const Image> fresh,
            std::span<const Image> candidates, std::span<const Bid> bids,
            const ClearingResult& clearing, const StepContext& ctx, StepOutcome& out) {
  thread_local std::vector<std::uint32_t> masks;
  masks.assign(candidates.size(), 0);
  for (std::size_t w : clearing.winners) masks[bids[w].image] |= 1U << bids[w].task;
  out.inferences = clearing.concurrency_used;
  thread_local std::vector<std::uint64_t> executed_ids;
  executed_ids.clear();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (masks[i] == 0) continue;
    out.executions.push_back({candidates[i], masks[i], state.id});
    executed_ids.push_back(candidates[i].id);
    state.deferred.erase(candidates[i].id);
  }
  const auto executed = [&](std::uint64_t id) {
    return std::find(executed_ids.begin(), executed_ids.end(), id) != executed_ids.end();
  };
  for (const Image& img : fresh) {
    if (executed(img.id)) continue;
    state.deferred.push(img, ctx.now_s + ctx.ttl_s);
    ++out.deferred_fresh;
    if (out.price.admits(img.best_esv) && !img.offloaded) out.isl_candidates.push_back(img);
  }
}

MarginalCost price_of(const SatelliteState& state, const StepContext& ctx,
                      const SchedulerVariant& variant, StepOutcome& out) {
  out.price = marginal_cost(*ctx.pricing, state.soc, state.temperature_c,
                            static_cast<double>(state.deferred.size()), variant.pricing);
  out.physical = physical_cost(*ctx.pricing, state.soc, state.temperature_c, variant.pricing);
  return out.price;
}

}  // namespace

ClearingResult greedy_select(std::span<const Bid> bids, double gflops_budget, int max_concurrent) {
  ClearingResult result;
  thread_local std::vector<std::size_t> order;
  order.resize(bids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return clears_before(bids[a], bids[b]); });
  double remaining = gflops_budget;
  thread_local std::vector<std::pair<std::uint64_t, double>> charged;
  charged.clear();
  for (std::size_t idx : order) {
    const Bid& bid = bids[idx];
    if (result.concurrency_used >= max_concurrent) {
      result.losers.push_back(idx);
      continue;
    }
    auto it = std::find_if(charged.begin(), charged.end(),
                           [&](const auto& c) { return c.first == bid.image_id; });
    const double already = it == charged.end() ? 0.0 : it->second;
    const double need = std::max(0.0, bid.gflops - already);
    if (need > remaining + kBudgetSlack) {
      result.losers.push_back(idx);
      continue;
    }
    remaining -= need;
    result.gflops_used += need;
    ++result.concurrency_used;
    result.winners.push_back(idx);
    if (it == charged.end()) {
      charged.emplace_back(bid.image_id, bid.gflops);
    } else {
      it->second = std::max(it->second, bid.gflops);
    }
  }
  return result;
}

double dp_select(std::span<const Bid> bids, double gflops_budget) {
  if (bids.size() > 20) throw std::invalid_argument("dp_select is an oracle for at most 20 bids");
  const auto capacity = static_cast<std::size_t>(std::floor(gflops_budget / 0.1 + kBudgetSlack));
  std::vector<double> best(capacity + 1, 0.0);
  for (const Bid& bid : bids) {
    const auto weight = static_cast<std::size_t>(std::llround(bid.gflops / 0.1));
    if (weight > capacity) continue;
    for (std::size_t c = capacity + 1; c-- > weight;) {
      best[c] = std::max(best[c], best[c - weight] + bid.esv);
    }
  }
  return best[capacity];
}

double clearing_value(std::span<const Bid> bids, const ClearingResult& result) {
  double total = 0.0;
  for (std::size_t w : result.winners) total += bids[w].esv;
  return total;
}

void StepOutcome::reset() {
  price = {};
  physical = {};
  inferences = 0;
  bids = expired = deferred_fresh = dropped = 0;
  executions.clear();
  isl_candidates.clear();
  offload_requests.clear();
}

std::vector<Image> retry_deferred(SatelliteState& state, const MarginalCost& price, double now_s,
                                  std::size_t* expired) {
  const std::size_t dropped = state.deferred.expire(now_s);
  if (expired != nullptr) *expired = dropped;
  std::vector<Image> retried;
  state.deferred.for_each_by_value([&](const DeferredQueue::Entry& e) {
    if (!price.admits(e.image.best_esv)) return false;
    retried.push_back(e.image);
    return true;
  });
  return retried;
}

void collect_bids(std::span<const Image> images, const TaskSet& tasks, const MarginalCost& price,
                  bool instant_compute, std::vector<Bid>& out) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Image& img = images[i];
    if (!price.admits(img.best_esv)) continue;
    for (std::size_t t = 0; t < img.num_tasks; ++t) {
      if (!price.admits(img.esv[t])) continue;
      out.push_back({i, static_cast<std::uint8_t>(t), img.esv[t],
                     instant_compute ? 0.0 : tasks[t].gflops, img.arrival_s, img.id});
    }
  }
}

void schedule_step_reference(SatelliteState& state, std::span<const Image> fresh,
                             const StepContext& ctx, const SchedulerVariant& variant,
                             StepOutcome& out) {
  out.reset();
  out.expired = state.deferred.expire(ctx.now_s);
  const MarginalCost price = price_of(state, ctx, variant, out);
  std::vector<Image> pool(fresh.begin(), fresh.end());
  const std::vector<Image> retried = retry_deferred(state, price, ctx.now_s);
  pool.insert(pool.end(), retried.begin(), retried.end());
  std::vector<Bid> bids;
  collect_bids(pool, *ctx.tasks, price, ctx.instant_compute, bids);
  out.bids = bids.size();
  const ClearingResult clearing =
      greedy_select(bids, ctx.envelope.gflops_budget, ctx.envelope.max_concurrent);
  settle(state, fresh, pool, bids, clearing, ctx, out);
}

void schedule_step(SatelliteState& state, std::span<const Image> fresh, const StepContext& ctx,
                   const SchedulerVariant& variant, StepOutcome& out) {
  if (!ctx.uniform_compute) {
    schedule_step_reference(state, fresh, ctx, variant, out);
    return;
  }
  out.reset();
  out.expired = state.deferred.expire(ctx.now_s);
  const MarginalCost price = price_of(state, ctx, variant, out);

  // With one pass cost g for every image, only the first K images in
  // best-value order can be charged, where K = min(slots, floor(G / g)).
  const double g = ctx.instant_compute ? 0.0 : (*ctx.tasks)[0].gflops;
  std::size_t k = static_cast<std::size_t>(std::max(0, ctx.envelope.max_concurrent));
  if (g > 0.0) {
    k = std::min(k, static_cast<std::size_t>(
                        std::floor(ctx.envelope.gflops_budget / g + kBudgetSlack)));
  }
  // Per-thread scratch, reused across steps.
  thread_local std::vector<Image> pool;
  thread_local std::vector<Bid> bids;
  pool.clear();
  bids.clear();
  if (k > 0 && !price.blocked) {
    for (const Image& img : fresh) {
      if (price.admits(img.best_esv)) pool.push_back(img);
    }
    std::size_t taken = 0;
    state.deferred.for_each_by_value([&](const DeferredQueue::Entry& e) {
      if (!price.admits(e.image.best_esv)) return false;
      pool.push_back(e.image);
      return ++taken < k;
    });
    std::sort(pool.begin(), pool.end(), [](const Image& a, const Image& b) {
      return DeferredQueue::key_of(a) < DeferredQueue::key_of(b);
    });
    if (pool.size() > k) pool.resize(k);
  }
  collect_bids(pool, *ctx.tasks, price, ctx.instant_compute, bids);
  out.bids = bids.size();
  const ClearingResult clearing =
      greedy_select(bids, ctx.envelope.gflops_budget, ctx.envelope.max_concurrent);
  settle(state, fresh, pool, bids, clearing, ctx, out);
}

}  // namespace orbsim
