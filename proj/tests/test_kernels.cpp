#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "orbsim/kernels.hpp"
#include "orbsim/orbit.hpp"
#include "orbsim/rng.hpp"

using namespace orbsim;

namespace {

FleetPositions random_shell(std::size_t n, std::uint64_t seed, double r_min, double r_max) {
  SplitMix64 rng(seed);
  FleetPositions pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * kPi * rng.uniform();
    const double r = r_min + (r_max - r_min) * rng.uniform();
    const double s = std::sqrt(1.0 - u * u);
    pos.x[i] = r * s * std::cos(phi);
    pos.y[i] = r * s * std::sin(phi);
    pos.z[i] = r * u;
  }
  return pos;
}

// Ray from p toward the sun meets the Earth sphere ahead of p.
bool ray_hits_earth(Vec3 p, Vec3 sun) {
  const double b = dot(p, sun);
  const double c = dot(p, p) - kEarthRadiusKm * kEarthRadiusKm;
  const double disc = b * b - c;
  if (disc < 0.0) return false;
  const double t_far = -b + std::sqrt(disc);
  return t_far > 0.0 && c > 0.0 && -b > 0.0;
}

void require_same_links(const std::vector<kernels::CandidateLink>& a,
                        const std::vector<kernels::CandidateLink>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].a == b[i].a);
    CHECK(a[i].b == b[i].b);
    CHECK(std::memcmp(&a[i].distance_sq, &b[i].distance_sq, sizeof(double)) == 0);
  }
}

}  // namespace

TEST_CASE("isa names round-trip") {
  CHECK(kernels::parse_isa("scalar") == kernels::Isa::kScalar);
  CHECK(kernels::parse_isa("avx2") == kernels::Isa::kAvx2);
  CHECK(kernels::parse_isa("auto") == kernels::best_supported_isa());
  CHECK(kernels::isa_name(kernels::Isa::kScalar) == "scalar");
  CHECK_THROWS(kernels::parse_isa("sse9"));
}

TEST_CASE("scalar and avx2 eclipse masks agree bit for bit") {
  if (!kernels::cpu_supports(kernels::Isa::kAvx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const auto& s = kernels::scalar_table();
  const auto& v = kernels::avx2_table();
  for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 9, 143, 1001}) {
    const FleetPositions pos = random_shell(n, 11 + n, 6500.0, 7500.0);
    for (int trial = 0; trial < 8; ++trial) {
      SplitMix64 rng(stream_key(3, Stream::kProperty, n, trial));
      const Vec3 d = sun_direction(rng.uniform() * kSiderealYearS, 360.0 * rng.uniform());
      std::vector<std::uint8_t> a(n, 7), b(n, 9);
      s.eclipse_mask(pos.view(), {d.x, d.y, d.z}, kEarthRadiusKm, a);
      v.eclipse_mask(pos.view(), {d.x, d.y, d.z}, kEarthRadiusKm, b);
      CHECK(a == b);
    }
  }
}

TEST_CASE("scalar and avx2 pair scans agree bit for bit") {
  if (!kernels::cpu_supports(kernels::Isa::kAvx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  for (std::size_t n : {0, 1, 2, 5, 8, 13, 143, 600}) {
    const FleetPositions pos = random_shell(n, 100 + n, 6800.0, 7000.0);
    std::vector<kernels::CandidateLink> a, b;
    kernels::scalar_table().pairs_within(pos.view(), 5000.0 * 5000.0, a);
    kernels::avx2_table().pairs_within(pos.view(), 5000.0 * 5000.0, b);
    require_same_links(a, b);
  }
}

TEST_CASE("pair scan matches a brute-force double loop") {
  const FleetPositions pos = random_shell(200, 5, 6800.0, 7000.0);
  const double range_sq = 4000.0 * 4000.0;
  std::vector<kernels::CandidateLink> expected;
  for (std::uint32_t i = 0; i < 200; ++i) {
    for (std::uint32_t j = i + 1; j < 200; ++j) {
      const double dx = pos.x[i] - pos.x[j], dy = pos.y[i] - pos.y[j], dz = pos.z[i] - pos.z[j];
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < range_sq) expected.push_back({i, j, d2});
    }
  }
  std::vector<kernels::CandidateLink> got;
  kernels::scalar_table().pairs_within(pos.view(), range_sq, got);
  require_same_links(expected, got);
}

TEST_CASE("eclipse mask matches a ray/sphere shadow oracle") {
  const FleetPositions pos = random_shell(5000, 77, 6700.0, 7200.0);
  std::size_t eclipsed = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const Vec3 sun = sun_direction(trial * 8.0e6, 0.0);
    const std::vector<std::uint8_t> mask = eclipse_mask(pos, sun);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const Vec3 p = pos.at(i);
      const double along = dot(p, sun);
      const double perp = norm(p - along * sun);
      if (std::abs(perp - kEarthRadiusKm) < 1e-6) continue;
      CHECK(static_cast<bool>(mask[i]) == ray_hits_earth(p, sun));
      CHECK(static_cast<bool>(mask[i]) == in_eclipse(p, sun));
      eclipsed += mask[i];
    }
  }
  CHECK(eclipsed > 0);
}

TEST_CASE("kernel selection is observable and reversible") {
  const kernels::Isa before = kernels::active().isa;
  kernels::select(kernels::Isa::kScalar);
  CHECK(kernels::active().isa == kernels::Isa::kScalar);
  if (kernels::cpu_supports(kernels::Isa::kAvx2)) {
    kernels::select(kernels::Isa::kAvx2);
    CHECK(kernels::active().isa == kernels::Isa::kAvx2);
  } else {
    CHECK_THROWS(kernels::select(kernels::Isa::kAvx2));
  }
  kernels::select(before);
}
