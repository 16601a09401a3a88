// Compiled with -mavx2. Nothing here may run unless cpu_supports(kAvx2).
#include <immintrin.h>

#include "orbsim/kernels.hpp"

namespace orbsim::kernels {
namespace {

// Operation order mirrors the scalar kernel exactly; no FMA.
void eclipse_mask_avx2(PositionView pos, SunVector sun, double shadow_radius,
                       std::span<std::uint8_t> out) {
  const std::size_t n = pos.size();
  const __m256d sx = _mm256_set1_pd(sun.x);
  const __m256d sy = _mm256_set1_pd(sun.y);
  const __m256d sz = _mm256_set1_pd(sun.z);
  const __m256d r_sq = _mm256_set1_pd(shadow_radius * shadow_radius);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(pos.x.data() + i);
    const __m256d y = _mm256_loadu_pd(pos.y.data() + i);
    const __m256d z = _mm256_loadu_pd(pos.z.data() + i);
    const __m256d along = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(x, sx), _mm256_mul_pd(y, sy)), _mm256_mul_pd(z, sz));
    const __m256d px = _mm256_sub_pd(x, _mm256_mul_pd(along, sx));
    const __m256d py = _mm256_sub_pd(y, _mm256_mul_pd(along, sy));
    const __m256d pz = _mm256_sub_pd(z, _mm256_mul_pd(along, sz));
    const __m256d perp_sq = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(px, px), _mm256_mul_pd(py, py)), _mm256_mul_pd(pz, pz));
    const __m256d shadow = _mm256_and_pd(_mm256_cmp_pd(along, zero, _CMP_LT_OQ),
                                         _mm256_cmp_pd(perp_sq, r_sq, _CMP_LT_OQ));
    const int bits = _mm256_movemask_pd(shadow);
    for (int lane = 0; lane < 4; ++lane) out[i + lane] = (bits >> lane) & 1;
  }
  if (i < n) {
    scalar_table().eclipse_mask(
        {pos.x.subspan(i), pos.y.subspan(i), pos.z.subspan(i)}, sun, shadow_radius,
        out.subspan(i));
  }
}

void pairs_within_avx2(PositionView pos, double range_sq, std::vector<CandidateLink>& out) {
  const std::size_t n = pos.size();
  const __m256d limit = _mm256_set1_pd(range_sq);
  alignas(32) double d_sq_lanes[4];
  for (std::size_t a = 0; a < n; ++a) {
    const __m256d ax = _mm256_set1_pd(pos.x[a]);
    const __m256d ay = _mm256_set1_pd(pos.y[a]);
    const __m256d az = _mm256_set1_pd(pos.z[a]);
    std::size_t b = a + 1;
    for (; b + 4 <= n; b += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pos.x.data() + b), ax);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(pos.y.data() + b), ay);
      const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pos.z.data() + b), az);
      const __m256d d_sq = _mm256_add_pd(
          _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
      const int bits = _mm256_movemask_pd(_mm256_cmp_pd(d_sq, limit, _CMP_LT_OQ));
      if (bits == 0) continue;
      _mm256_store_pd(d_sq_lanes, d_sq);
      for (int lane = 0; lane < 4; ++lane) {
        if ((bits >> lane) & 1) {
          out.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b + lane),
                         d_sq_lanes[lane]});
        }
      }
    }
    for (; b < n; ++b) {
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

const KernelTable& avx2_table() {
  static constexpr KernelTable table{Isa::kAvx2, eclipse_mask_avx2, pairs_within_avx2};
  return table;
}

}  // namespace orbsim::kernels
