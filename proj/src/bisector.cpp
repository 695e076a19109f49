#include "softpack/bisector.hpp"

#include <algorithm>
#include <cmath>

#include "softpack/errors.hpp"
#include "softpack/numeric.hpp"

namespace softpack {

double bisector_ray(const ConvexBody& m, Vec2 g, Vec2 e, double rho, double cap) {
  if (m.kind() == ConvexBody::Kind::Disk) {
    const double eg = dot(e, g);
    if (eg <= 0.0) return cap;
    return std::min(dot(g, g) / (2.0 * eg), cap);
  }
  // F is nonincreasing along the ray, positive at 0.
  auto f = [&](double t) { return m.gauge(t * e - g) - t / rho; };
  // Inside a thick bisector F vanishes up to rounding; treat |F| below this
  // as a tie, which the closed half-region of o keeps.
  constexpr double kTie = 1e-14;
  const double f_cap = f(cap);
  if (f_cap >= -kTie) return cap;
  double lo = std::min(cap, 0.5 * m.gauge(g) * rho);
  double f_lo = f(lo);
  if (f_lo < 0.0) {
    lo = 0.0;
    f_lo = m.gauge(g);
  }
  double t = numeric::bracketed_root(f, lo, cap, f_lo, f_cap, 52);
  // Where M has flat edges the bisector can be thick; take the far side.
  const double probe = t * (1.0 + 1e-9) + 1e-12;
  if (probe < cap && f(probe) >= -kTie) {
    t = numeric::bisect_predicate([&](double s) { return f(s) >= -kTie; }, probe, cap, 1e-13 * cap);
  }
  return t;
}

namespace {

// Index of the generator whose half-region cuts the ray at φ first, or -1 if
// none does before cap_factor·ρ(φ).
int active_piece(const ConvexBody& m, const std::vector<Vec2>& gens, double cap_factor, double phi,
                 double* radius = nullptr) {
  const Vec2 e = unit(phi);
  const double rho = m.radial(phi);
  double best = cap_factor * rho;
  int which = -1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const double t = bisector_ray(m, gens[i], e, rho, best);
    if (t < best) {
      best = t;
      which = static_cast<int>(i);
    }
  }
  if (radius) *radius = best;
  return which;
}

std::vector<double> piece_breaks(const ConvexBody& m, const std::vector<Vec2>& gens, double cap_factor,
                                 int scan) {
  std::vector<double> out;
  const double h = kTwoPi / scan;
  int prev = active_piece(m, gens, cap_factor, 0.0);
  for (int k = 1; k <= scan; ++k) {
    const double a = h * (k - 1), b = h * k;
    const int cur = active_piece(m, gens, cap_factor, b);
    if (cur != prev) {
      out.push_back(wrap_angle(numeric::bisect_predicate(
          [&](double phi) { return active_piece(m, gens, cap_factor, phi) == prev; }, a, b, 1e-15)));
    }
    prev = cur;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BisectorCurve trace_bisector(const ConvexBody& m, Vec2 x, Vec2 y, double window) {
  const Vec2 g = y - x;
  if (norm(g) == 0.0) throw DegenerateInput("trace_bisector: x and y coincide");
  auto ray = [&](double phi) {
    const double rho = m.radial(phi);
    return std::pair{bisector_ray(m, g, unit(phi), rho, window * rho), window * rho};
  };
  auto crosses = [&](double phi) {
    const auto [t, cap] = ray(phi);
    return t < cap;
  };
  const double phi0 = polar_angle(g);
  BisectorCurve out{x, y, {}, 0.0, 0.0, 0.0};
  if (!crosses(phi0)) return out;
  const double lo = numeric::bisect_predicate(crosses, phi0, phi0 - kPi, 1e-13);
  const double hi = numeric::bisect_predicate(crosses, phi0, phi0 + kPi, 1e-13);
  out.phi_begin = lo;
  out.phi_end = hi;
  out.trace = sample_curve([&](double phi) { return x + ray(phi).first * unit(phi); }, lo, hi, kGeomTol, 64);
  for (const Vec2& p : out.trace) {
    const double dx = m.gauge(p - x);
    out.max_residual = std::max(out.max_residual, std::abs(dx - m.gauge(p - y)) / std::max(1.0, dx));
  }
  return out;
}

std::optional<Vec2> tripoint(const ConvexBody& m, Vec2 x, Vec2 y, Vec2 z) {
  if (x == y || y == z || x == z) throw DegenerateInput("tripoint: points must be distinct");
  const Vec2 g = y - x, h = z - x;
  if (std::abs(cross(g, h)) <= 1e-12 * norm(g) * norm(h)) return std::nullopt;
  const double scale = m.gauge(g) + m.gauge(h);
  auto center = [&](double phi, bool& capped) {
    const double rho = m.radial(phi);
    const double cap = 1e8 * scale * rho;
    const double t = bisector_ray(m, g, unit(phi), rho, cap);
    capped = t >= cap;
    return x + t * unit(phi);
  };
  auto gap = [&](double phi) {
    bool capped;
    const Vec2 c = center(phi, capped);
    return m.gauge(c - z) - m.gauge(c - x);
  };
  const double phi0 = polar_angle(g);
  const int n = 720;
  double prev_phi = 0.0, prev_val = 0.0;
  bool have_prev = false;
  for (int k = 1; k < n; ++k) {
    const double phi = phi0 - kPi + kTwoPi * k / n;
    bool capped;
    center(phi, capped);
    if (capped) {
      have_prev = false;
      continue;
    }
    const double v = gap(phi);
    if (have_prev && (v > 0.0) != (prev_val > 0.0)) {
      const double r = numeric::bracketed_root(gap, prev_phi, phi, prev_val, v, 52);
      bool c;
      return center(r, c);
    }
    prev_phi = phi;
    prev_val = v;
    have_prev = true;
  }
  return std::nullopt;
}

BNGon build_bngon(const ConvexBody& m, std::vector<Vec2> generators, double window) {
  BNGon gon;
  gon.window = window;
  for (const Vec2& g : generators) {
    if (m.gauge(g) < 2.0 - 1e-12) {
      throw ConstraintViolation("build_bngon: generator with gauge below 2");
    }
    bool dup = false;
    for (const Vec2& q : gon.generators) dup = dup || norm(q - g) <= 1e-12 * std::max(1.0, norm(g));
    if (!dup) gon.generators.push_back(g);
  }
  if (gon.generators.empty()) throw InputError("build_bngon: no generators");
  gon.active.assign(gon.generators.size(), false);
  const int scan = std::max(2048, 128 * static_cast<int>(gon.generators.size()));
  gon.vertex_angles = piece_breaks(m, gon.generators, window, scan);
  const double h = kTwoPi / scan;
  for (int k = 0; k < scan; ++k) {
    const int w = active_piece(m, gon.generators, window, h * (k + 0.5));
    if (w < 0) gon.bounded = false; else gon.active[static_cast<std::size_t>(w)] = true;
  }
  for (double a : gon.vertex_angles) {
    for (double side : {-1e-9, 1e-9}) {
      const int w = active_piece(m, gon.generators, window, a + side);
      if (w < 0) gon.bounded = false; else gon.active[static_cast<std::size_t>(w)] = true;
    }
  }
  gon.effective_sides = static_cast<int>(std::count(gon.active.begin(), gon.active.end(), true));
  gon.boundary = radial_region({0, 0}, [&](double phi) { return bngon_radius(m, gon, phi); },
                               gon.vertex_angles);
  return gon;
}

double bngon_radius(const ConvexBody& m, const BNGon& gon, double phi) {
  double r;
  active_piece(m, gon.generators, gon.window, phi, &r);
  return r;
}

namespace {

std::vector<double> truncation_breaks(const ConvexBody& m, const BNGon& gon, double cap) {
  auto breaks = piece_breaks(m, gon.generators, cap, std::max(2048, 128 * static_cast<int>(gon.generators.size())));
  for (double b : m.radial_breaks()) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

}  // namespace

double truncated_area(const ConvexBody& m, const BNGon& gon, double lambda) {
  if (!(lambda >= 0.0)) throw InputError("truncated_area: lambda must be nonnegative");
  const double cap = std::min(1.0 + lambda, gon.window);
  const auto breaks = truncation_breaks(m, gon, cap);
  auto f = [&](double phi) {
    double r;
    active_piece(m, gon.generators, cap, phi, &r);
    return 0.5 * r * r;
  };
  return numeric::integrate(f, 0.0, kTwoPi, breaks, 1e-13, 10);
}

ArcChainRegion truncated_region(const ConvexBody& m, const BNGon& gon, double lambda, double tol) {
  const double cap = std::min(1.0 + lambda, gon.window);
  const auto breaks = truncation_breaks(m, gon, cap);
  return radial_region({0, 0}, [&](double phi) {
    double r;
    active_piece(m, gon.generators, cap, phi, &r);
    return r;
  }, breaks, tol);
}

}  // namespace softpack
