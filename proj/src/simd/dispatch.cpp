#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "softpack/simd/kernels.hpp"

namespace softpack::simd {

namespace {

bool cpu_has_avx2() {
#if defined(SOFTPACK_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

// SOFTPACK_SIMD=scalar pins the reference path.
Isa detect() {
  if (const char* env = std::getenv("SOFTPACK_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("requested ISA not available on this CPU");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#if defined(SOFTPACK_HAVE_AVX2)
#define SOFTPACK_DISPATCH(fn, ...) \
  return active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define SOFTPACK_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void min_plus_relax(std::span<double> dst, std::span<const double> w, double base) {
  SOFTPACK_DISPATCH(min_plus_relax, dst, w, base);
}

void min_plus_relax_arg(std::span<double> dst, std::span<std::int32_t> arg,
                        std::span<const double> w, double base, std::int32_t tag) {
  SOFTPACK_DISPATCH(min_plus_relax_arg, dst, arg, w, base, tag);
}

double sum_min_minus(std::span<const double> a, std::span<const double> b,
                     std::span<const double> r) {
  SOFTPACK_DISPATCH(sum_min_minus, a, b, r);
}

std::int64_t count_ball_halfspaces(std::span<const double> xs, std::span<const double> ys,
                                   std::span<const double> zs, double radius_sq,
                                   std::span<const Plane3> planes) {
  SOFTPACK_DISPATCH(count_ball_halfspaces, xs, ys, zs, radius_sq, planes);
}

#undef SOFTPACK_DISPATCH

}  // namespace softpack::simd
