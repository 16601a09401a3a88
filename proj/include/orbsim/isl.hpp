#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orbsim/orbit.hpp"
#include "orbsim/pricing.hpp"
#include "orbsim/workload.hpp"

namespace orbsim {

struct IslConfig {
  double link_cost_fraction = 0.05;
  double latency_penalty = 0.10;
  // Link cost grows by distance / distance_scale_km when positive.
  double distance_scale_km = 0.0;
  bool free_isl = false;

  void validate() const;

  bool operator==(const IslConfig&) const = default;
};

// What one satellite publishes to its neighbours: physical state only.
struct PhysicalSnapshot {
  double soc;
  double temperature_c;
  bool sunlit;
};

struct NeighborView {
  int id;
  double distance_km;
  PhysicalSnapshot state;
  MarginalCost physical;  // physical cost of `state`
};

struct OffloadRecord {
  double t_s;
  std::uint64_t image_id;
  int source;
  int destination;
  double local_cost;
  double adjusted_cost;
  double destination_cost;
  std::uint32_t carried_tasks;  // bit k: head k still clears the destination's physical cost
};

struct OffloadChoice {
  int destination;
  double adjusted_cost;
  double destination_cost;
};

// Empty for a neighbour at its floors.
std::optional<double> neighbor_adjusted_cost(const PricingConfig& pricing, const IslConfig& isl,
                                             const PhysicalSnapshot& neighbor,
                                             double local_cost, double distance_km = 0.0,
                                             PricingMode mode = PricingMode::kMultiplicative);

// Cheapest neighbour by adjusted cost (ties to the lower id), if strictly
// cheaper than `local_physical`. Independent of the image, so one call per
// satellite-step serves every loser.
std::optional<OffloadChoice> cheapest_neighbor(const MarginalCost& local_physical,
                                               std::span<const NeighborView> neighbors,
                                               const IslConfig& isl);

// The image moves only if it was never offloaded and still clears the
// destination's physical cost.
bool accepts_offload(const Image& image, const OffloadChoice& choice);

// cheapest_neighbor followed by accepts_offload.
std::optional<OffloadChoice> choose_offload_target(const Image& image,
                                                   const MarginalCost& local_physical,
                                                   std::span<const NeighborView> neighbors,
                                                   const IslConfig& isl);

NeighborView make_neighbor_view(int id, double distance_km, const PhysicalSnapshot& state,
                                const PricingConfig& pricing,
                                PricingMode mode = PricingMode::kMultiplicative);

// Previous-step physical state and cost of each adjacent satellite.
void snapshot_neighbor_states(std::span<const Neighbor> adjacency,
                              std::span<const PhysicalSnapshot> prior_states,
                              std::span<const MarginalCost> prior_costs,
                              std::vector<NeighborView>& out);

}  // namespace orbsim
