#include "orbsim/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "orbsim/rng.hpp"

namespace orbsim {

void ConstellationConfig::validate() const {
  if (num_planes <= 0) throw std::invalid_argument("constellation.num_planes must be positive");
  if (sats_per_plane <= 0) {
    throw std::invalid_argument("constellation.sats_per_plane must be positive");
  }
  if (!(altitude_km > 0.0)) throw std::invalid_argument("constellation.altitude_km must be positive");
  for (double tier : altitude_tiers_km) {
    if (!(tier > 0.0)) throw std::invalid_argument("constellation.altitude_tiers_km entries must be positive");
  }
  if (!(isl_range_km > 0.0)) throw std::invalid_argument("constellation.isl_range_km must be positive");
  if (!(isl_failure_prob >= 0.0 && isl_failure_prob <= 1.0)) {
    throw std::invalid_argument("constellation.isl_failure_prob must lie in [0, 1]");
  }
  if (phase_jitter && !(phase_jitter_max_deg >= 0.0)) {
    throw std::invalid_argument("constellation.phase_jitter_max_deg must be non-negative");
  }
}

double orbital_period_s(double semi_major_km) {
  return 2.0 * kPi * std::sqrt(semi_major_km * semi_major_km * semi_major_km / kEarthMuKm3PerS2);
}

double OrbitalElements::mean_motion() const {
  return std::sqrt(kEarthMuKm3PerS2 / (semi_major_km * semi_major_km * semi_major_km));
}

double OrbitalElements::period_s() const { return orbital_period_s(semi_major_km); }

std::vector<OrbitalElements> build_constellation(const ConstellationConfig& cfg,
                                                 std::uint64_t seed) {
  cfg.validate();
  SplitMix64 rng(stream_key(seed, Stream::kOrbit));
  std::uniform_real_distribution<double> jitter(-cfg.phase_jitter_max_deg,
                                                cfg.phase_jitter_max_deg);
  std::vector<OrbitalElements> fleet;
  fleet.reserve(static_cast<std::size_t>(cfg.total()));
  const double raan_step = 360.0 / cfg.num_planes;
  const double u_step = 360.0 / cfg.sats_per_plane;
  for (int p = 0; p < cfg.num_planes; ++p) {
    const double altitude = cfg.altitude_tiers_km.empty()
                                ? cfg.altitude_km
                                : cfg.altitude_tiers_km[static_cast<std::size_t>(p) %
                                                        cfg.altitude_tiers_km.size()];
    for (int s = 0; s < cfg.sats_per_plane; ++s) {
      double u_deg = s * u_step;
      if (cfg.phase_jitter) u_deg += jitter(rng);
      fleet.push_back({kEarthRadiusKm + altitude, deg_to_rad(p * raan_step),
                       deg_to_rad(cfg.inclination_deg), deg_to_rad(u_deg), p});
    }
  }
  return fleet;
}

namespace {

struct PlaneBasis {
  Vec3 p;  // ascending node direction
  Vec3 q;  // 90 degrees ahead in the orbit plane
};

PlaneBasis plane_basis(const OrbitalElements& el) {
  const double co = std::cos(el.raan_rad), so = std::sin(el.raan_rad);
  const double ci = std::cos(el.inclination_rad), si = std::sin(el.inclination_rad);
  return {{co, so, 0.0}, {-so * ci, co * ci, si}};
}

}  // namespace

Vec3 propagate(const OrbitalElements& el, double t_s) {
  const PlaneBasis basis = plane_basis(el);
  const double u = el.arg_latitude0_rad + el.mean_motion() * t_s;
  const double cu = std::cos(u), su = std::sin(u);
  return el.semi_major_km * (cu * basis.p + su * basis.q);
}

void propagate_all(const std::vector<OrbitalElements>& fleet, double t_s, FleetPositions& out) {
  if (out.size() != fleet.size()) out = FleetPositions(fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const Vec3 r = propagate(fleet[i], t_s);
    out.x[i] = r.x;
    out.y[i] = r.y;
    out.z[i] = r.z;
  }
}

Vec3 sun_direction(double t_s, double epoch_deg) {
  const double t_year = std::fmod(t_s, kSiderealYearS);
  const double lambda = deg_to_rad(epoch_deg) + 2.0 * kPi * t_year / kSiderealYearS;
  const double eps = deg_to_rad(kObliquityDeg);
  return {std::cos(lambda), std::sin(lambda) * std::cos(eps), std::sin(lambda) * std::sin(eps)};
}

std::vector<std::uint8_t> eclipse_mask(const FleetPositions& pos, Vec3 sun) {
  std::vector<std::uint8_t> out(pos.size());
  kernels::active().eclipse_mask(pos.view(), {sun.x, sun.y, sun.z}, kEarthRadiusKm, out);
  return out;
}

bool in_eclipse(Vec3 position, Vec3 sun) {
  const double along = dot(position, sun);
  const Vec3 perp = position - along * sun;
  return along < 0.0 && dot(perp, perp) < kEarthRadiusKm * kEarthRadiusKm;
}

double time_to_eclipse_exit(const OrbitalElements& el, double t_s, Vec3 sun) {
  if (!in_eclipse(propagate(el, t_s), sun)) return 0.0;
  const PlaneBasis basis = plane_basis(el);
  const double ps = dot(basis.p, sun), qs = dot(basis.q, sun);
  const double amplitude = std::hypot(ps, qs);
  const double c = std::sqrt(1.0 - (kEarthRadiusKm * kEarthRadiusKm) /
                                       (el.semi_major_km * el.semi_major_km));
  // Shadow arc is centred on u* = phi + pi with half-width acos(c / A).
  const double half_width = std::acos(std::min(1.0, c / amplitude));
  const double center = std::atan2(qs, ps) + kPi;
  const double u = el.arg_latitude0_rad + el.mean_motion() * t_s;
  const double delta = std::remainder(u - center, 2.0 * kPi);
  return std::max(0.0, (half_width - delta) / el.mean_motion());
}

double Topology::mean_degree() const {
  if (adjacency.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& row : adjacency) total += row.size();
  return static_cast<double>(total) / static_cast<double>(adjacency.size());
}

void link_topology(const FleetPositions& pos, double range_km, double failure_prob,
                   std::uint64_t seed, std::uint64_t step,
                   std::vector<std::vector<Neighbor>>& adjacency) {
  adjacency.resize(pos.size());
  for (auto& row : adjacency) row.clear();
  if (failure_prob >= 1.0) return;
  thread_local std::vector<kernels::CandidateLink> candidates;
  candidates.clear();
  kernels::active().pairs_within(pos.view(), range_km * range_km, candidates);
  for (const auto& link : candidates) {
    if (failure_prob > 0.0 &&
        unit_interval(stream_key(seed, Stream::kLinkFailure, step, link.a, link.b)) <
            failure_prob) {
      continue;
    }
    const double d = std::sqrt(link.distance_sq);
    adjacency[link.a].push_back({static_cast<int>(link.b), d});
    adjacency[link.b].push_back({static_cast<int>(link.a), d});
  }
}

}  // namespace orbsim
