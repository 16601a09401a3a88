#include "orbsim/kernels.hpp"

namespace orbsim::kernels {
namespace {

void eclipse_mask_scalar(PositionView pos, SunVector sun, double shadow_radius,
                         std::span<std::uint8_t> out) {
  const double r_sq = shadow_radius * shadow_radius;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double along = pos.x[i] * sun.x + pos.y[i] * sun.y + pos.z[i] * sun.z;
    const double px = pos.x[i] - along * sun.x;
    const double py = pos.y[i] - along * sun.y;
    const double pz = pos.z[i] - along * sun.z;
    const double perp_sq = px * px + py * py + pz * pz;
    out[i] = (along < 0.0 && perp_sq < r_sq) ? 1 : 0;
  }
}

void pairs_within_scalar(PositionView pos, double range_sq, std::vector<CandidateLink>& out) {
  const std::size_t n = pos.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double dx = pos.x[b] - pos.x[a];
      const double dy = pos.y[b] - pos.y[a];
      const double dz = pos.z[b] - pos.z[a];
      const double d_sq = dx * dx + dy * dy + dz * dz;
      if (d_sq < range_sq) {
        out.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), d_sq});
      }
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static constexpr KernelTable table{Isa::kScalar, eclipse_mask_scalar, pairs_within_scalar};
  return table;
}

}  // namespace orbsim::kernels
