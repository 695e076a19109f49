#pragma once

// Thin wrappers over Boost.Math root finding, quadrature and 1D minimization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "softpack/errors.hpp"

namespace softpack::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Root of f on [lo, hi] given the endpoint values (which must bracket a sign
/// change or contain a zero). Returns the bracket midpoint after convergence.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi, int bits = 50) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw NonConvergence("bracketed_root: endpoints do not bracket a root");
  }
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(bits), max_iter);
  return 0.5 * (a + b);
}

/// Boundary of a predicate that is true at `lo` and false at `hi`, by bisection.
template <class Pred>
double bisect_predicate(Pred&& pred, double lo, double hi, double tol = 1e-14) {
  for (int it = 0; it < 200 && std::abs(hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Adaptive Gauss–Kronrod over [a, b], split at the given interior breakpoints.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breaks = {},
                 double tol = 1e-13, unsigned max_depth = 12) {
  if (b <= a) return 0.0;
  std::vector<double> pts;
  pts.reserve(breaks.size() + 2);
  pts.push_back(a);
  for (double t : breaks) {
    if (t > a && t < b) pts.push_back(t);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] <= 0.0) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, pts[i], pts[i + 1], max_depth, tol, &err);
  }
  return total;
}

/// As integrate, but subdivides until the Kronrod error estimate of each
/// piece is below an absolute budget. Suited to integrands that are small
/// differences of large terms, where a relative target sits below rounding.
/// `noise` is the pointwise rounding level of f; pieces whose error estimate
/// is at that level are accepted rather than split further. Pieces narrower
/// than 1e-12 of the range are accepted as they are, which bounds the work
/// spent on a jump that no breakpoint resolves.
template <class F>
double integrate_abs(F&& f, double a, double b, std::span<const double> breaks = {},
                     double abs_tol = 1e-13, double noise = 0.0, unsigned max_depth = 48) {
  if (b <= a) return 0.0;
  std::vector<double> pts{a, b};
  for (double t : breaks) {
    if (t > a && t < b) pts.push_back(t);
  }
  std::sort(pts.begin(), pts.end());
  const double width = b - a;
  auto piece = [&](auto&& self, double lo, double hi, unsigned depth) -> double {
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 0.0, &err);
    // Boost reports the error of the rule on [-1, 1]; rescale to the piece.
    err *= 0.5 * (hi - lo);
    if (depth == 0 || hi - lo < 1e-12 * width || err <= std::max(abs_tol / width, noise) * (hi - lo)) return v;
    const double mid = 0.5 * (lo + hi);
    return self(self, lo, mid, depth - 1) + self(self, mid, hi, depth - 1);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) total += piece(piece, pts[i], pts[i + 1], max_depth);
  }
  return total;
}

struct Minimum {
  double x;
  double value;
};

/// Brent minimization on [lo, hi].
template <class F>
Minimum brent_minimize(F&& f, double lo, double hi, int bits = 40) {
  std::uintmax_t max_iter = 200;
  auto [x, v] = boost::math::tools::brent_find_minima(f, lo, hi, bits, max_iter);
  return {x, v};
}

}  // namespace softpack::numeric
