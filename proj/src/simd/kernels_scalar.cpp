#include <algorithm>

#include "softpack/simd/kernels.hpp"

namespace softpack::simd::scalar {

void min_plus_relax(std::span<double> dst, std::span<const double> w, double base) {
  const std::size_t n = std::min(dst.size(), w.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double v = base + w[i];
    if (v < dst[i]) dst[i] = v;
  }
}

void min_plus_relax_arg(std::span<double> dst, std::span<std::int32_t> arg,
                        std::span<const double> w, double base, std::int32_t tag) {
  const std::size_t n = std::min({dst.size(), arg.size(), w.size()});
  for (std::size_t i = 0; i < n; ++i) {
    const double v = base + w[i];
    if (v < dst[i]) {
      dst[i] = v;
      arg[i] = tag;
    }
  }
}

double sum_min_minus(std::span<const double> a, std::span<const double> b,
                     std::span<const double> r) {
  const std::size_t n = std::min({a.size(), b.size(), r.size()});
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::min(a[i], b[i]) - r[i];
  return s;
}

std::int64_t count_ball_halfspaces(std::span<const double> xs, std::span<const double> ys,
                                   std::span<const double> zs, double radius_sq,
                                   std::span<const Plane3> planes) {
  const std::size_t n = std::min({xs.size(), ys.size(), zs.size()});
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i], y = ys[i], z = zs[i];
    if (x * x + y * y + z * z > radius_sq) continue;
    bool inside = true;
    for (const Plane3& p : planes) {
      if (p.nx * x + p.ny * y + p.nz * z > p.d) {
        inside = false;
        break;
      }
    }
    count += inside ? 1 : 0;
  }
  return count;
}

}  // namespace softpack::simd::scalar
