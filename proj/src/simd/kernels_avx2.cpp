#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "softpack/simd/kernels.hpp"

// Compiled with -mavx2 but without -mfma: every product and sum is rounded
// exactly as in the scalar reference so the two paths agree bit for bit.

namespace softpack::simd::avx2 {

void min_plus_relax(std::span<double> dst, std::span<const double> w, double base) {
  const std::size_t n = std::min(dst.size(), w.size());
  const __m256d vb = _mm256_set1_pd(base);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(vb, _mm256_loadu_pd(w.data() + i));
    const __m256d d = _mm256_loadu_pd(dst.data() + i);
    const __m256d lt = _mm256_cmp_pd(v, d, _CMP_LT_OQ);
    _mm256_storeu_pd(dst.data() + i, _mm256_blendv_pd(d, v, lt));
  }
  scalar::min_plus_relax(dst.subspan(i, n - i), w.subspan(i, n - i), base);
}

void min_plus_relax_arg(std::span<double> dst, std::span<std::int32_t> arg,
                        std::span<const double> w, double base, std::int32_t tag) {
  const std::size_t n = std::min({dst.size(), arg.size(), w.size()});
  const __m256d vb = _mm256_set1_pd(base);
  const __m128i vt = _mm_set1_epi32(tag);
  const __m256i pick_low = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(vb, _mm256_loadu_pd(w.data() + i));
    const __m256d d = _mm256_loadu_pd(dst.data() + i);
    const __m256d lt = _mm256_cmp_pd(v, d, _CMP_LT_OQ);
    _mm256_storeu_pd(dst.data() + i, _mm256_blendv_pd(d, v, lt));
    const __m128i mask32 = _mm256_castsi256_si128(
        _mm256_permutevar8x32_epi32(_mm256_castpd_si256(lt), pick_low));
    auto* ap = reinterpret_cast<__m128i*>(arg.data() + i);
    const __m128i old = _mm_loadu_si128(ap);
    _mm_storeu_si128(ap, _mm_blendv_epi8(old, vt, mask32));
  }
  scalar::min_plus_relax_arg(dst.subspan(i, n - i), arg.subspan(i, n - i), w.subspan(i, n - i),
                             base, tag);
}

double sum_min_minus(std::span<const double> a, std::span<const double> b,
                     std::span<const double> r) {
  const std::size_t n = std::min({a.size(), b.size(), r.size()});
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_min_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_sub_pd(m, _mm256_loadu_pd(r.data() + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  return s + scalar::sum_min_minus(a.subspan(i, n - i), b.subspan(i, n - i), r.subspan(i, n - i));
}

std::int64_t count_ball_halfspaces(std::span<const double> xs, std::span<const double> ys,
                                   std::span<const double> zs, double radius_sq,
                                   std::span<const Plane3> planes) {
  const std::size_t n = std::min({xs.size(), ys.size(), zs.size()});
  const __m256d vr = _mm256_set1_pd(radius_sq);
  std::int64_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d y = _mm256_loadu_pd(ys.data() + i);
    const __m256d z = _mm256_loadu_pd(zs.data() + i);
    const __m256d r2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)),
                                     _mm256_mul_pd(z, z));
    __m256d in = _mm256_cmp_pd(r2, vr, _CMP_LE_OQ);
    for (const Plane3& p : planes) {
      if (_mm256_movemask_pd(in) == 0) break;
      const __m256d dotp =
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(p.nx), x),
                                      _mm256_mul_pd(_mm256_set1_pd(p.ny), y)),
                        _mm256_mul_pd(_mm256_set1_pd(p.nz), z));
      in = _mm256_and_pd(in, _mm256_cmp_pd(dotp, _mm256_set1_pd(p.d), _CMP_LE_OQ));
    }
    count += std::popcount(static_cast<unsigned>(_mm256_movemask_pd(in)));
  }
  return count + scalar::count_ball_halfspaces(xs.subspan(i, n - i), ys.subspan(i, n - i),
                                               zs.subspan(i, n - i), radius_sq, planes);
}

}  // namespace softpack::simd::avx2
