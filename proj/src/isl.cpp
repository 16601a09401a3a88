#include "orbsim/isl.hpp"

#include <algorithm>
#include <stdexcept>

namespace orbsim {

void IslConfig::validate() const {
  if (link_cost_fraction < 0.0 || latency_penalty < 0.0 || distance_scale_km < 0.0) {
    throw std::invalid_argument("isl costs must be non-negative");
  }
}

namespace {

double link_surcharge(const IslConfig& isl, double local_cost, double distance_km) {
  if (isl.free_isl) return 0.0;
  double link = isl.link_cost_fraction * local_cost;
  if (isl.distance_scale_km > 0.0) link *= 1.0 + distance_km / isl.distance_scale_km;
  return link + isl.latency_penalty;
}

}  // namespace

std::optional<double> neighbor_adjusted_cost(const PricingConfig& pricing, const IslConfig& isl,
                                             const PhysicalSnapshot& neighbor,
                                             double local_cost, double distance_km,
                                             PricingMode mode) {
  const MarginalCost phys = physical_cost(pricing, neighbor.soc, neighbor.temperature_c, mode);
  if (phys.blocked) return std::nullopt;
  return phys.total + link_surcharge(isl, local_cost, distance_km);
}

std::optional<OffloadChoice> cheapest_neighbor(const MarginalCost& local_physical,
                                               std::span<const NeighborView> neighbors,
                                               const IslConfig& isl) {
  const double local = local_physical.blocked ? 0.0 : local_physical.total;
  std::optional<OffloadChoice> best;
  for (const NeighborView& n : neighbors) {
    const MarginalCost& phys = n.physical;
    if (phys.blocked) continue;
    const double adjusted = phys.total + link_surcharge(isl, local, n.distance_km);
    if (!best || adjusted < best->adjusted_cost ||
        (adjusted == best->adjusted_cost && n.id < best->destination)) {
      best = OffloadChoice{n.id, adjusted, phys.total};
    }
  }
  if (!best) return std::nullopt;
  if (!local_physical.blocked && !(best->adjusted_cost < local_physical.total)) return std::nullopt;
  return best;
}

bool accepts_offload(const Image& image, const OffloadChoice& choice) {
  return !image.offloaded && image.best_esv > choice.destination_cost;
}

std::optional<OffloadChoice> choose_offload_target(const Image& image,
                                                   const MarginalCost& local_physical,
                                                   std::span<const NeighborView> neighbors,
                                                   const IslConfig& isl) {
  if (image.offloaded) return std::nullopt;
  const auto best = cheapest_neighbor(local_physical, neighbors, isl);
  if (!best || !accepts_offload(image, *best)) return std::nullopt;
  return best;
}

NeighborView make_neighbor_view(int id, double distance_km, const PhysicalSnapshot& state,
                                const PricingConfig& pricing, PricingMode mode) {
  return {id, distance_km, state, physical_cost(pricing, state.soc, state.temperature_c, mode)};
}

void snapshot_neighbor_states(std::span<const Neighbor> adjacency,
                              std::span<const PhysicalSnapshot> prior_states,
                              std::span<const MarginalCost> prior_costs,
                              std::vector<NeighborView>& out) {
  out.clear();
  for (const Neighbor& n : adjacency) {
    const auto j = static_cast<std::size_t>(n.id);
    out.push_back({n.id, n.distance_km, prior_states[j], prior_costs[j]});
  }
}

}  // namespace orbsim
