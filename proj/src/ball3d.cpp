#include "softpack/ball3d.hpp"

#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "softpack/errors.hpp"
#include "softpack/numeric.hpp"
#include "softpack/simd/kernels.hpp"

namespace softpack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTol = 1e-12;

double ball_volume(double rho) { return 4.0 * kPi / 3.0 * rho * rho * rho; }

double max_lambda() { return dodec_constants().midradius - 1.0; }

void require_lambda(double lambda, double hi, const char* who) {
  if (!(lambda > 0.0 && lambda <= hi + kTol)) {
    std::ostringstream os;
    os << who << ": lambda " << lambda << " outside (0, " << hi << "]";
    throw InputError(os.str());
  }
}

}  // namespace

DodecConstants dodec_constants() {
  return {std::sqrt(3.0) * std::tan(kPi / 5.0), 0.5 * std::sqrt(10.0 - 2.0 * std::sqrt(5.0)), 1.0};
}

double cap_volume(double rho, double h) {
  if (!(h >= 0.0 && h <= rho)) {
    std::ostringstream os;
    os << "cap_volume: height " << h << " outside [0, " << rho << "]";
    throw InputError(os.str());
  }
  return kPi * (rho * h * h - h * h * h / 3.0);
}

CapSumReport cap_sum_bound(double lambda, std::span<const double> heights) {
  CapSumReport r;
  const double rho = 1.0 + lambda;
  bool heights_ok = true;
  for (double h : heights) {
    r.F += cap_volume(rho, h);
    r.sum_heights += h;
    heights_ok = heights_ok && h <= lambda;
  }
  const bool lambda_ok = lambda > 0.0 && lambda <= max_lambda() + kTol;
  r.applicable = lambda_ok && heights_ok && r.sum_heights <= 12.0 * lambda * (1.0 + kTol);
  r.twelve_caps = lambda > 0.0 ? 12.0 * cap_volume(rho, std::min(lambda, rho)) : 0.0;
  r.bound_holds = r.F <= r.twelve_caps * (1.0 + kTol);
  r.shell_volume = ball_volume(rho) - dodecahedron_ball_volume(std::max(rho, 0.0));
  return r;
}

double dodecahedron_ball_volume(double rho) {
  if (!(rho >= 0.0)) throw InputError("dodecahedron_ball_volume: negative radius");
  // Each face at distance 1 splits into ten right triangles about its center;
  // in polar coordinates (s, θ) of the face plane the radial cone element is
  // s ds dθ/(1 + s²)^{3/2} and the ray is cut at min(ρ, √(1 + s²)).
  const double apothem = std::sqrt(dodec_constants().midradius * dodec_constants().midradius - 1.0);
  const double reach = rho > 1.0 ? std::sqrt(rho * rho - 1.0) : 0.0;
  const double r3 = rho * rho * rho / 3.0;
  auto inner = [&](double theta) {
    const double smax = apothem / std::cos(theta);
    const double sc = std::min(reach, smax);
    return sc * sc / 6.0 + r3 * (1.0 / std::sqrt(1.0 + sc * sc) - 1.0 / std::sqrt(1.0 + smax * smax));
  };
  std::vector<double> breaks;
  if (reach > apothem) breaks.push_back(std::acos(apothem / reach));
  return 120.0 * numeric::integrate(inner, 0.0, kPi / 5.0, breaks, 1e-15);
}

double tau_closed_form(double lambda) {
  require_lambda(lambda, max_lambda(), "tau");
  const double l2 = lambda * lambda, l3 = l2 * lambda, s = 1.0 + lambda;
  return 4.0 * kPi / (4.0 * kPi * s * s * s - 36.0 * kPi * (l2 + 2.0 / 3.0 * l3));
}

double tau_by_caps(double lambda) {
  require_lambda(lambda, max_lambda(), "tau");
  const double rho = 1.0 + lambda;
  return ball_volume(1.0) / (ball_volume(rho) - 12.0 * cap_volume(rho, lambda));
}

double tau(double lambda) {
  const double hi = dodec_constants().circumradius - 1.0;
  require_lambda(lambda, hi, "tau");
  if (lambda <= max_lambda()) return tau_closed_form(lambda);
  return ball_volume(1.0) / dodecahedron_ball_volume(1.0 + lambda);
}

TauHatConstants tau_hat_constants() {
  const double phi0 = std::atan(1.0 / std::sqrt(2.0));
  return {phi0, -std::atan(std::sqrt(2.0 / 3.0) * std::tan(5.0 * phi0))};
}

double tau_hat(double lambda) {
  require_lambda(lambda, 2.0 / std::sqrt(3.0) - 1.0, "tau_hat");
  const double p = tau_hat_constants().psi0;
  const double l2 = lambda * lambda, l3 = l2 * lambda;
  const double a = kPi - 6.0 * p;
  return a / (a + (3.0 * kPi - 18.0 * p) * lambda - (6.0 * kPi + 18.0 * p) * l2 - (5.0 * kPi + 6.0 * p) * l3);
}

HalesReport hales_functional(std::span<const Vec3> points) {
  const double a0 = kHalesAlpha0;
  HalesReport r;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double n = norm(points[i]);
    if (n < 2.0 - kTol || n > 2.0 * a0 + kTol) {
      std::ostringstream os;
      os << "hales_functional: point " << i << " has norm " << n << " outside [2, " << 2.0 * a0 << "]";
      throw ConstraintViolation(os.str());
    }
    for (std::size_t j = 0; j < i; ++j) {
      const double d = norm(points[i] - points[j]);
      if (d < 2.0 - kTol) {
        std::ostringstream os;
        os << "hales_functional: points " << j << " and " << i << " are at distance " << d << " < 2";
        throw ConstraintViolation(os.str());
      }
    }
    r.value += (a0 - 0.5 * n) / (a0 - 1.0);
  }
  r.within_bound = r.value <= 12.0 + kTol;
  return r;
}

Polytope3Cell make_cell(std::vector<Face3> faces) {
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const double n = norm(faces[i].normal);
    if (!(n > 0.0)) throw InputError("make_cell: face " + std::to_string(i) + " has a zero normal");
    faces[i].normal = faces[i].normal / n;
    if (!(faces[i].distance >= 1.0 - kTol)) {
      std::ostringstream os;
      os << "invalid cell: face " << i << " at distance " << faces[i].distance << " < 1 cuts the unit ball";
      throw ConstraintViolation(os.str());
    }
  }
  return {std::move(faces)};
}

Polytope3Cell dodecahedron_cell() {
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Face3> f;
  for (double s : {-1.0, 1.0}) {
    for (double t : {-1.0, 1.0}) {
      f.push_back({{0.0, s, t * g}, 1.0});
      f.push_back({{s, t * g, 0.0}, 1.0});
      f.push_back({{t * g, 0.0, s}, 1.0});
    }
  }
  return make_cell(std::move(f));
}

Polytope3Cell fcc_cell() {
  std::vector<Face3> f;
  for (double s : {-1.0, 1.0}) {
    for (double t : {-1.0, 1.0}) {
      f.push_back({{s, t, 0.0}, 1.0});
      f.push_back({{s, 0.0, t}, 1.0});
      f.push_back({{0.0, s, t}, 1.0});
    }
  }
  return make_cell(std::move(f));
}

bool caps_disjoint(const Polytope3Cell& cell, double rho) {
  std::vector<double> cone;
  cone.reserve(cell.faces.size());
  for (const Face3& f : cell.faces) cone.push_back(f.distance < rho ? std::acos(f.distance / rho) : -1.0);
  for (std::size_t i = 0; i < cell.faces.size(); ++i) {
    if (cone[i] < 0.0) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (cone[j] < 0.0) continue;
      const double c = std::clamp(dot(cell.faces[i].normal, cell.faces[j].normal), -1.0, 1.0);
      // Cones touching along a single ray (D at its midradius) still count.
      if (std::acos(c) < cone[i] + cone[j] - 1e-9) return false;
    }
  }
  return true;
}

CellDensity truncated_cell_density(const Polytope3Cell& cell, double lambda, const MonteCarloOptions& mc) {
  require_lambda(lambda, max_lambda(), "truncated_cell_density");
  if (mc.samples < 8) throw InputError("truncated_cell_density: need at least 8 samples");
  for (std::size_t i = 0; i < cell.faces.size(); ++i) {
    if (!(cell.faces[i].distance >= 1.0 - kTol)) {
      throw ConstraintViolation("invalid cell: face " + std::to_string(i) + " closer than 1 to the origin");
    }
  }
  const double rho = 1.0 + lambda;
  std::vector<simd::Plane3> planes;
  for (const Face3& f : cell.faces) {
    if (f.distance < rho) planes.push_back({f.normal.x, f.normal.y, f.normal.z, f.distance});
  }

  struct Stratum {
    std::int64_t n = 0;
    std::int64_t hits = 0;
  };
  auto run = [&](int octant, std::int64_t n) {
    std::seed_seq seq{static_cast<std::uint32_t>(mc.seed), static_cast<std::uint32_t>(mc.seed >> 32),
                      static_cast<std::uint32_t>(octant)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, rho);
    const double sx = (octant & 1) ? -1.0 : 1.0, sy = (octant & 2) ? -1.0 : 1.0, sz = (octant & 4) ? -1.0 : 1.0;
    constexpr std::int64_t kBatch = 4096;
    std::vector<double> xs(kBatch), ys(kBatch), zs(kBatch);
    Stratum s{n, 0};
    for (std::int64_t done = 0; done < n; done += kBatch) {
      const std::int64_t m = std::min(kBatch, n - done);
      for (std::int64_t k = 0; k < m; ++k) {
        xs[k] = sx * u(rng);
        ys[k] = sy * u(rng);
        zs[k] = sz * u(rng);
      }
      const auto len = static_cast<std::size_t>(m);
      s.hits += simd::count_ball_halfspaces({xs.data(), len}, {ys.data(), len}, {zs.data(), len}, rho * rho, planes);
    }
    return s;
  };

  std::array<std::future<Stratum>, 8> jobs;
  for (int o = 0; o < 8; ++o) {
    const std::int64_t n = mc.samples / 8 + (o < mc.samples % 8 ? 1 : 0);
    jobs[o] = std::async(std::launch::async, run, o, n);
  }
  // Strata are combined in octant order, so thread timing cannot change the result.
  const double box = rho * rho * rho;
  double vol = 0.0, comp = 0.0, var = 0.0;
  for (auto& j : jobs) {
    const Stratum s = j.get();
    const double p = static_cast<double>(s.hits) / static_cast<double>(s.n);
    const double term = box * p - comp;
    const double next = vol + term;
    comp = (next - vol) - term;
    vol = next;
    var += box * box * p * (1.0 - p) / static_cast<double>(s.n);
  }

  CellDensity r;
  r.volume_mc = vol;
  r.volume_std_error = std::sqrt(var);
  r.density_mc = ball_volume(1.0) / vol;
  r.density_std_error = r.density_mc * r.volume_std_error / vol;
  r.caps_disjoint = caps_disjoint(cell, rho);
  r.volume_exact = kNaN;
  r.density_exact = kNaN;
  if (r.caps_disjoint) {
    double v = ball_volume(rho);
    for (const Face3& f : cell.faces) {
      if (f.distance < rho) v -= cap_volume(rho, rho - f.distance);
    }
    r.volume_exact = v;
    r.density_exact = ball_volume(1.0) / v;
  }
  return r;
}

IndirectEstimate indirect_estimate_check(int m, double lambda, std::span<const double> heights) {
  if (m <= 12) throw InputError("indirect_estimate_check: requires m > 12, got " + std::to_string(m));
  require_lambda(lambda, max_lambda(), "indirect_estimate_check");
  const double a = kHalesAlpha0 - 1.0;
  IndirectEstimate r;
  r.lower = 12.0 * lambda;
  r.upper = 12.0 * a - m * (a - lambda);
  r.contradiction = (m - 12) * (a - lambda);
  r.chain_infeasible = r.contradiction > 0.0;
  if (heights.empty()) {
    r.sum_heights = kNaN;
  } else {
    r.sum_heights = 0.0;
    for (double h : heights) r.sum_heights += h;
    r.heights_satisfy_chain = r.lower < r.sum_heights && r.sum_heights <= r.upper;
  }
  return r;
}

}  // namespace softpack
