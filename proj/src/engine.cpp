#include "orbsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <cmath>
#include <exception>
#include <memory>
#include <thread>

#include "orbsim/format.hpp"

namespace orbsim {
namespace {

constexpr double kWindowS = 600.0;
constexpr std::uint64_t kDegreeSampleEvery = 60;

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, RunStreams streams);
  MetricsReport run();

 private:
  struct Scratch {
    std::vector<Image> fresh;
    StepOutcome outcome;
    std::vector<NeighborView> neighbors;
    std::vector<RoutedImage> routes;
    std::vector<OffloadRecord> records;
  };

  void prepare_step(std::uint64_t step);
  void advance_range(std::size_t begin, std::size_t end, std::uint64_t step);
  void advance_satellite(std::size_t i, std::uint64_t step);
  void route_losers(std::size_t i, Scratch& sc, double now_s);
  void merge_step(std::uint64_t step);
  bool uses_links() const;

  const ScenarioConfig& cfg_;
  RunStreams streams_;
  PricingConfig pricing_;
  IslConfig isl_;
  TaskSet tasks_;
  CategoryPriors priors_;
  std::unique_ptr<ArrivalSampler> sampler_;
  std::vector<OrbitalElements> fleet_;
  Topology topo_;
  Vec3 sun_;
  ExecutionEnvelope envelope_;
  bool uniform_compute_ = true;
  std::vector<SatelliteState> states_;
  std::vector<PhysicalSnapshot> snapshot_;
  std::vector<MarginalCost> snapshot_cost_;
  std::vector<std::vector<Image>> inbox_;
  std::vector<std::vector<Image>> next_inbox_;
  std::vector<SatelliteTally> tallies_;
  FleetTally fleet_tally_;
  std::vector<Scratch> scratch_;
  std::vector<double> prices_;
  std::uint64_t timeseries_every_ = 1;
};

Simulation::Simulation(const ScenarioConfig& cfg, RunStreams streams)
    : cfg_(cfg),
      streams_(streams),
      pricing_(cfg.effective_pricing()),
      isl_(cfg.isl),
      tasks_(scale_tasks(cfg.workload.num_tasks)),
      priors_(CategoryPriors::from_csv(cfg.workload.category_table.empty()
                                           ? CategoryPriors::default_path()
                                           : cfg.workload.category_table)),
      fleet_(build_constellation(cfg.constellation, cfg.seed)),
      envelope_(execution_envelope(cfg.hardware, cfg.timestep_s)),
      fleet_tally_(tasks_) {
  isl_.free_isl = cfg.relaxations.any_isl_free();
  sampler_ = std::make_unique<ArrivalSampler>(cfg_.workload, tasks_, priors_,
                                              cfg_.variant.valuation, cfg_.seed);
  for (const Task& t : tasks_) uniform_compute_ = uniform_compute_ && t.gflops == tasks_[0].gflops;
  const std::size_t n = fleet_.size();
  topo_.positions = FleetPositions(n);
  topo_.adjacency.resize(n);
  states_.resize(n);
  snapshot_.resize(n);
  snapshot_cost_.resize(n);
  inbox_.resize(n);
  next_inbox_.resize(n);
  tallies_.resize(n);
  scratch_.resize(n);
  prices_.assign(n, 0.0);
  const auto windows = static_cast<std::size_t>(std::ceil(cfg_.duration_s / kWindowS));
  for (std::size_t i = 0; i < n; ++i) {
    states_[i].id = static_cast<int>(i);
    states_[i].soc = 1.0;
    states_[i].temperature_c = cfg_.hardware.t_nominal_c;
    snapshot_[i] = {states_[i].soc, states_[i].temperature_c, true};
    snapshot_cost_[i] = physical_cost(pricing_, states_[i].soc, states_[i].temperature_c,
                                      cfg_.variant.pricing);
    tallies_[i].initial_soc = states_[i].soc;
    tallies_[i].window_executions.assign(windows, 0);
    tallies_[i].generated_events.assign(tasks_.size(), 0);
  }
  timeseries_every_ = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(cfg_.output.timeseries_interval_s / cfg_.timestep_s)));
  if (streams_.timeseries != nullptr) *streams_.timeseries << "t,sat_id,soc,temp,P,executions\n";
  if (streams_.trace != nullptr) {
    *streams_.trace << "t,image_id,source,destination,local_cost,adjusted_cost,destination_cost,"
                       "carried_tasks\n";
  }
}

bool Simulation::uses_links() const {
  if (cfg_.relaxations.oracle) return false;
  return (cfg_.scheduler == SchedulerKind::kMarginalCost && cfg_.variant.isl) ||
         cfg_.scheduler == SchedulerKind::kPhoenix;
}

void Simulation::prepare_step(std::uint64_t step) {
  const double t = static_cast<double>(step) * cfg_.timestep_s;
  propagate_all(fleet_, t, topo_.positions);
  sun_ = sun_direction(t, cfg_.constellation.sun_epoch_deg);
  topo_.eclipsed = eclipse_mask(topo_.positions, sun_);
  const bool sample_degree = step % kDegreeSampleEvery == 0;
  if (uses_links() || sample_degree) {
    link_topology(topo_.positions, cfg_.constellation.isl_range_km,
                  cfg_.constellation.isl_failure_prob, cfg_.seed, step, topo_.adjacency);
    if (sample_degree) {
      fleet_tally_.degree_sum += topo_.mean_degree();
      ++fleet_tally_.degree_samples;
    }
  }
  if (!uses_links()) {
    for (auto& row : topo_.adjacency) row.clear();
  }
  for (std::size_t i = 0; i < states_.size(); ++i) snapshot_[i].sunlit = topo_.sunlit(i);
}

void Simulation::advance_range(std::size_t begin, std::size_t end, std::uint64_t step) {
  for (std::size_t i = begin; i < end; ++i) advance_satellite(i, step);
}

void Simulation::route_losers(std::size_t i, Scratch& sc, double now_s) {
  const StepOutcome& out = sc.outcome;
  if (out.isl_candidates.empty() || topo_.adjacency[i].empty()) return;
  snapshot_neighbor_states(topo_.adjacency[i], snapshot_, snapshot_cost_, sc.neighbors);
  const auto choice =
      cheapest_neighbor(out.physical, sc.neighbors, isl_);
  if (!choice) return;
  for (const Image& img : out.isl_candidates) {
    if (!accepts_offload(img, *choice)) continue;
    states_[i].deferred.erase(img.id);
    sc.routes.push_back({img, choice->destination});
    std::uint32_t carried = 0;
    for (std::size_t t = 0; t < img.num_tasks; ++t) {
      if (img.esv[t] > choice->destination_cost) carried |= 1U << t;
    }
    sc.records.push_back({now_s, img.id, static_cast<int>(i), choice->destination,
                          out.physical.total, choice->adjusted_cost, choice->destination_cost,
                          carried});
  }
}

void Simulation::advance_satellite(std::size_t i, std::uint64_t step) {
  const HardwareConfig& hw = cfg_.hardware;
  const Relaxations& relax = cfg_.relaxations;
  const double dt = cfg_.timestep_s;
  const double now = static_cast<double>(step) * dt;
  SatelliteState& st = states_[i];
  SatelliteTally& tally = tallies_[i];
  Scratch& sc = scratch_[i];
  sc.routes.clear();
  sc.records.clear();

  sc.fresh.swap(inbox_[i]);
  inbox_[i].clear();
  const std::size_t forwarded = sc.fresh.size();
  sampler_->sample(static_cast<int>(i), step, now, dt, sc.fresh);
  tally.arrivals += sc.fresh.size() - forwarded;
  for (std::size_t k = forwarded; k < sc.fresh.size(); ++k) {
    for (std::size_t t = 0; t < tasks_.size(); ++t) tally.generated_events[t] += sc.fresh[k].has_event(t);
  }
  std::sort(sc.fresh.begin(), sc.fresh.end(), [](const Image& a, const Image& b) {
    return a.arrival_s != b.arrival_s ? a.arrival_s < b.arrival_s : a.id < b.id;
  });

  const bool sunlit = topo_.sunlit(i);
  const double p_solar = solar_power(hw, sunlit, topo_.positions.at(i), sun_);
  if (!sunlit) ++tally.eclipsed_steps;

  StepContext ctx;
  ctx.tasks = &tasks_;
  ctx.hw = &hw;
  ctx.pricing = &pricing_;
  ctx.now_s = now;
  ctx.dt_s = dt;
  ctx.ttl_s = cfg_.ttl_s;
  ctx.envelope = envelope_;
  if (relax.battery_unbounded()) {
    if (st.temperature_c >= hw.t_max_c && !relax.oracle) ctx.envelope.max_concurrent = 0;
  } else {
    ctx.envelope.max_concurrent = floor_limited_concurrency(hw, st.soc, st.temperature_c, p_solar,
                                                            dt, envelope_.max_concurrent);
  }
  ctx.instant_compute = relax.compute_unbounded();
  ctx.uniform_compute = uniform_compute_;
  ctx.sunlit = sunlit;
  ctx.p_solar_w = p_solar;

  StepOutcome& out = sc.outcome;
  if (relax.oracle) {
    exhaustive_step(st, sc.fresh, ctx, out);
  } else {
    switch (cfg_.scheduler) {
      case SchedulerKind::kMarginalCost:
        schedule_step(st, sc.fresh, ctx, cfg_.variant, out);
        prices_[i] = out.price.blocked ? -1.0 : out.price.total;
        if (cfg_.variant.isl) route_losers(i, sc, now);
        break;
      case SchedulerKind::kStaticFifo:
        static_fifo_step(st, sc.fresh, ctx, out);
        break;
      case SchedulerKind::kPriority:
        priority_step(st, sc.fresh, ctx, out);
        break;
      case SchedulerKind::kEsa:
        esa_step(st, cfg_.esa, sc.fresh, ctx, out);
        break;
      case SchedulerKind::kPhoenix:
        if (!sunlit) ctx.eclipse_exit_s = time_to_eclipse_exit(fleet_[i], now, sun_);
        snapshot_neighbor_states(topo_.adjacency[i], snapshot_, snapshot_cost_, sc.neighbors);
        phoenix_step(st, cfg_.phoenix, sc.fresh, sc.neighbors, ctx, out);
        for (const RoutedImage& r : out.offload_requests) {
          sc.routes.push_back(r);
          const PhysicalSnapshot& d = snapshot_[static_cast<std::size_t>(r.destination)];
          const MarginalCost dest = physical_cost(pricing_, d.soc, d.temperature_c);
          sc.records.push_back({now, r.image.id, static_cast<int>(i), r.destination, 0.0, 0.0,
                                dest.blocked ? -1.0 : dest.total, 0U});
        }
        break;
    }
  }

  const double p_load = load_power(hw, out.inferences);
  const double soc_before = st.soc;
  st.soc = relax.battery_unbounded() ? 1.0 : step_battery(hw, st.soc, p_solar, p_load, dt);
  tally.energy.record(hw, soc_before, st.soc, p_solar, p_load, dt);
  if (st.soc < hw.soc_critical) ++tally.idle_below_floor_steps;
  st.temperature_c = step_thermal(hw, st.temperature_c, p_load, sunlit, dt);
  tally.sample_state(st.soc, st.temperature_c, hw);

  std::uint32_t images_run = 0;
  for (const Execution& e : out.executions) {
    images_run += e.first_pass;
    tally.executed_heads += static_cast<std::uint64_t>(std::popcount(e.tasks));
  }
  tally.executed_images += images_run;
  tally.expired += out.expired;
  tally.dropped += out.dropped;
  if (!out.executions.empty()) {
    const auto window = static_cast<std::size_t>(now / kWindowS);
    if (window < tally.window_executions.size()) {
      tally.window_executions[window] += static_cast<std::uint32_t>(out.executions.size());
    }
  }
}

void Simulation::merge_step(std::uint64_t step) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    Scratch& sc = scratch_[i];
    for (const Execution& e : sc.outcome.executions) fleet_tally_.credit(e, tasks_, tallies_);
    for (RoutedImage& r : sc.routes) {
      r.image.offloaded = true;
      next_inbox_[static_cast<std::size_t>(r.destination)].push_back(r.image);
      ++fleet_tally_.offloads;
    }
    for (const OffloadRecord& rec : sc.records) {
      for (std::size_t t = 0; t < tasks_.size(); ++t) {
        fleet_tally_.tasks[t].offloaded += (rec.carried_tasks >> t) & 1U;
      }
      if (streams_.trace != nullptr) {
        *streams_.trace << fmt9(rec.t_s) << ',' << rec.image_id << ',' << rec.source << ','
                        << rec.destination << ',' << fmt9(rec.local_cost) << ','
                        << fmt9(rec.adjusted_cost) << ',' << fmt9(rec.destination_cost) << ','
                        << rec.carried_tasks << '\n';
      }
    }
  }
  std::swap(inbox_, next_inbox_);
  for (auto& box : next_inbox_) box.clear();
  if (streams_.timeseries != nullptr && step % timeseries_every_ == 0) {
    const double t = static_cast<double>(step) * cfg_.timestep_s;
    const bool priced = cfg_.scheduler == SchedulerKind::kMarginalCost && !cfg_.relaxations.oracle;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      *streams_.timeseries << fmt9(t) << ',' << i << ',' << fmt9(states_[i].soc) << ','
                           << fmt9(states_[i].temperature_c) << ',';
      if (priced) {
        if (prices_[i] < 0.0) {
          *streams_.timeseries << "blocked";
        } else {
          *streams_.timeseries << fmt9(prices_[i]);
        }
      }
      *streams_.timeseries << ',' << scratch_[i].outcome.executions.size() << '\n';
    }
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    snapshot_[i].soc = states_[i].soc;
    snapshot_[i].temperature_c = states_[i].temperature_c;
    snapshot_cost_[i] = physical_cost(pricing_, states_[i].soc, states_[i].temperature_c,
                                      cfg_.variant.pricing);
  }
}

MetricsReport Simulation::run() {
  kernels::select(kernels::parse_isa(cfg_.kernel_isa));
  const std::uint64_t steps = cfg_.steps();
  const std::size_t n = states_.size();
  const auto workers = static_cast<std::size_t>(
      std::clamp<int>(cfg_.threads, 1, static_cast<int>(std::max<std::size_t>(n, 1))));
  const auto range_of = [&](std::size_t w) {
    return std::pair{n * w / workers, n * (w + 1) / workers};
  };

  if (workers == 1) {
    for (std::uint64_t step = 0; step < steps; ++step) {
      prepare_step(step);
      advance_range(0, n, step);
      merge_step(step);
    }
  } else {
    std::barrier sync(static_cast<std::ptrdiff_t>(workers));
    std::atomic<bool> stop{false};
    std::uint64_t current = 0;
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (;;) {
          sync.arrive_and_wait();
          if (stop.load()) return;
          try {
            const auto [b, e] = range_of(w);
            advance_range(b, e, current);
          } catch (...) {
            errors[w] = std::current_exception();
          }
          sync.arrive_and_wait();
        }
      });
    }
    for (std::uint64_t step = 0; step < steps; ++step) {
      prepare_step(step);
      current = step;
      sync.arrive_and_wait();
      try {
        const auto [b, e] = range_of(0);
        advance_range(b, e, step);
      } catch (...) {
        errors[0] = std::current_exception();
      }
      sync.arrive_and_wait();
      for (const auto& err : errors) {
        if (err) {
          stop = true;
          sync.arrive_and_wait();
          pool.clear();
          std::rethrow_exception(err);
        }
      }
      merge_step(step);
    }
    stop = true;
    sync.arrive_and_wait();
  }
  return build_report(tallies_, fleet_tally_, states_, cfg_.hardware,
                      static_cast<double>(steps) * cfg_.timestep_s);
}

}  // namespace

MetricsReport run_scenario(const ScenarioConfig& cfg, RunStreams streams) {
  cfg.validate();
  Simulation sim(cfg, streams);
  return sim.run();
}

}  // namespace orbsim
