#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace orbsim {

// Per-step geometry kernels. Every variant must produce bit-identical output
// to the scalar reference; tests compare them on random inputs.
namespace kernels {

enum class Isa { kScalar, kAvx2 };

struct PositionView {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;
  std::size_t size() const { return x.size(); }
};

struct SunVector {
  double x, y, z;
};

struct CandidateLink {
  std::uint32_t a;
  std::uint32_t b;
  double distance_sq;
};

// out[i] = 1 if satellite i is inside the cylindrical shadow of radius
// `shadow_radius` behind the Earth, else 0.
using EclipseMaskFn = void (*)(PositionView pos, SunVector sun, double shadow_radius,
                               std::span<std::uint8_t> out);

// Appends every pair (a < b) with squared separation < range_sq, ordered by a
// then b.
using PairsWithinFn = void (*)(PositionView pos, double range_sq,
                               std::vector<CandidateLink>& out);

struct KernelTable {
  Isa isa;
  EclipseMaskFn eclipse_mask;
  PairsWithinFn pairs_within;
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();

bool cpu_supports(Isa isa);
Isa best_supported_isa();

// The table used by the simulator. Defaults to the best supported ISA.
const KernelTable& active();
// Throws std::runtime_error if the CPU lacks the ISA.
void select(Isa isa);

std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);

}  // namespace kernels
}  // namespace orbsim
