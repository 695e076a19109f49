#pragma once

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant selected at runtime. Every entry point in the dispatching
// namespace forwards to the active instruction set; the `scalar` and `avx2`
// namespaces are exposed so tests can compare them directly.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace softpack::simd {

enum class Isa { Scalar, Avx2 };

/// Half-space n·x <= d in 3-space.
struct Plane3 {
  double nx;
  double ny;
  double nz;
  double d;
};

bool isa_available(Isa isa);
Isa active_isa();
/// Overrides the runtime choice (tests, benchmarking). Throws if unavailable.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

/// dst[i] = min(dst[i], base + w[i]).
void min_plus_relax(std::span<double> dst, std::span<const double> w, double base);

/// As min_plus_relax, also writing `tag` into arg[i] wherever dst[i] strictly
/// improves. Ties keep the earlier tag.
void min_plus_relax_arg(std::span<double> dst, std::span<std::int32_t> arg,
                        std::span<const double> w, double base, std::int32_t tag);

/// Σ_i (min(a[i], b[i]) - r[i]).
double sum_min_minus(std::span<const double> a, std::span<const double> b,
                     std::span<const double> r);

/// Number of points (xs[i], ys[i], zs[i]) with |p|² <= radius_sq that satisfy
/// every half-space.
std::int64_t count_ball_halfspaces(std::span<const double> xs, std::span<const double> ys,
                                   std::span<const double> zs, double radius_sq,
                                   std::span<const Plane3> planes);

namespace scalar {
void min_plus_relax(std::span<double> dst, std::span<const double> w, double base);
void min_plus_relax_arg(std::span<double> dst, std::span<std::int32_t> arg,
                        std::span<const double> w, double base, std::int32_t tag);
double sum_min_minus(std::span<const double> a, std::span<const double> b,
                     std::span<const double> r);
std::int64_t count_ball_halfspaces(std::span<const double> xs, std::span<const double> ys,
                                   std::span<const double> zs, double radius_sq,
                                   std::span<const Plane3> planes);
}  // namespace scalar

namespace avx2 {
void min_plus_relax(std::span<double> dst, std::span<const double> w, double base);
void min_plus_relax_arg(std::span<double> dst, std::span<std::int32_t> arg,
                        std::span<const double> w, double base, std::int32_t tag);
double sum_min_minus(std::span<const double> a, std::span<const double> b,
                     std::span<const double> r);
std::int64_t count_ball_halfspaces(std::span<const double> xs, std::span<const double> ys,
                                   std::span<const double> zs, double radius_sq,
                                   std::span<const Plane3> planes);
}  // namespace avx2

}  // namespace softpack::simd
