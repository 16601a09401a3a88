#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "orbsim/kernels.hpp"

namespace orbsim {

inline constexpr double kEarthRadiusKm = 6378.137;
inline constexpr double kEarthMuKm3PerS2 = 398600.4418;
inline constexpr double kSiderealYearS = 365.25 * 86400.0;
inline constexpr double kObliquityDeg = 23.44;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
  friend double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
};

struct ConstellationConfig {
  int num_planes = 13;
  int sats_per_plane = 11;
  double altitude_km = 500.0;
  double inclination_deg = 53.0;
  bool phase_jitter = false;
  double phase_jitter_max_deg = 5.0;
  // Empty: every plane at altitude_km. Otherwise plane p uses tiers[p % size].
  std::vector<double> altitude_tiers_km;
  double isl_range_km = 5000.0;
  double isl_failure_prob = 0.0;
  // Ecliptic longitude of the sun at t = 0; 0 is the March equinox.
  double sun_epoch_deg = 0.0;

  int total() const { return num_planes * sats_per_plane; }
  void validate() const;

  bool operator==(const ConstellationConfig&) const = default;
};

inline const std::vector<double> kDefaultAltitudeTiersKm{450.0, 475.0, 500.0, 525.0, 550.0};

struct OrbitalElements {
  double semi_major_km;
  double raan_rad;
  double inclination_rad;
  double arg_latitude0_rad;
  int plane;

  double mean_motion() const;
  double period_s() const;
};

double orbital_period_s(double semi_major_km);

std::vector<OrbitalElements> build_constellation(const ConstellationConfig& cfg,
                                                 std::uint64_t seed);

Vec3 propagate(const OrbitalElements& el, double t_s);

// Structure-of-arrays positions for the whole fleet, laid out for the kernels.
struct FleetPositions {
  std::vector<double> x, y, z;

  explicit FleetPositions(std::size_t n = 0) : x(n), y(n), z(n) {}
  std::size_t size() const { return x.size(); }
  Vec3 at(std::size_t i) const { return {x[i], y[i], z[i]}; }
  kernels::PositionView view() const { return {x, y, z}; }
};

void propagate_all(const std::vector<OrbitalElements>& fleet, double t_s, FleetPositions& out);

Vec3 sun_direction(double t_s, double epoch_deg = 0.0);

std::vector<std::uint8_t> eclipse_mask(const FleetPositions& pos, Vec3 sun);
bool in_eclipse(Vec3 position, Vec3 sun);

// Seconds until the satellite leaves the shadow, holding the sun fixed over
// the arc. Zero if sunlit now.
double time_to_eclipse_exit(const OrbitalElements& el, double t_s, Vec3 sun);

struct Neighbor {
  int id;
  double distance_km;
};

struct Topology {
  FleetPositions positions;
  std::vector<std::uint8_t> eclipsed;
  std::vector<std::vector<Neighbor>> adjacency;

  bool sunlit(std::size_t i) const { return eclipsed[i] == 0; }
  double mean_degree() const;
};

// Links every pair closer than range_km, then drops each link independently
// with failure_prob using a hash of (seed, step, a, b).
void link_topology(const FleetPositions& pos, double range_km, double failure_prob,
                   std::uint64_t seed, std::uint64_t step,
                   std::vector<std::vector<Neighbor>>& adjacency);

}  // namespace orbsim
