#include "softpack/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "softpack/errors.hpp"
#include "softpack/numeric.hpp"
#include "softpack/optimize.hpp"

namespace softpack {

double lattice_det(const LatticePacking& b) { return cross(b.u, b.v); }

LatticePacking reduce_basis(const ConvexBody& m, LatticePacking b) {
  if (!(std::abs(lattice_det(b)) > 1e-12 * norm(b.u) * norm(b.v))) {
    throw DegenerateInput("reduce_basis: basis vectors are dependent");
  }
  for (int it = 0; it < 200; ++it) {
    if (m.gauge(b.u) > m.gauge(b.v)) std::swap(b.u, b.v);
    // The Euclidean projection lands within a few steps of the best multiple.
    const double k0 = std::round(dot(b.v, b.u) / dot(b.u, b.u));
    Vec2 best = b.v;
    double best_gauge = m.gauge(b.v);
    for (double k = k0 - 3; k <= k0 + 3; k += 1.0) {
      const Vec2 w = b.v - k * b.u;
      const double gw = m.gauge(w);
      if (gw < best_gauge - 1e-15 * best_gauge) {
        best = w;
        best_gauge = gw;
      }
    }
    if (best.x == b.v.x && best.y == b.v.y) break;
    b.v = best;
  }
  if (lattice_det(b) < 0.0) b.v = -1.0 * b.v;
  return b;
}

std::vector<Vec2> lattice_vectors(const ConvexBody& m, const LatticePacking& b, double max_gauge) {
  const double det = std::abs(lattice_det(b));
  if (!(det > 0.0)) throw DegenerateInput("lattice_vectors: degenerate basis");
  const double reach = max_gauge * m.circumradius();
  const long kmax = static_cast<long>(std::ceil(reach * norm(b.v) / det));
  const long lmax = static_cast<long>(std::ceil(reach * norm(b.u) / det));
  if (kmax > 4000 || lmax > 4000) throw InputError("lattice_vectors: search box too large");
  std::vector<Vec2> out;
  for (long k = -kmax; k <= kmax; ++k) {
    for (long l = -lmax; l <= lmax; ++l) {
      if (k == 0 && l == 0) continue;
      const Vec2 x = static_cast<double>(k) * b.u + static_cast<double>(l) * b.v;
      if (m.gauge(x) <= max_gauge) out.push_back(x);
    }
  }
  return out;
}

Vec2 shortest_vector(const ConvexBody& m, const LatticePacking& b) { return reduce_basis(m, b).u; }

void validate_packing(const ConvexBody& m, const LatticePacking& b, double tol) {
  const Vec2 s = shortest_vector(m, b);
  const double g = m.gauge(s);
  if (g < 2.0 - tol) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "lattice vector (%.9g, %.9g) has gauge %.9g < 2: translates overlap", s.x, s.y, g);
    throw ConstraintViolation(msg);
  }
}

LatticePacking normalize_packing(const ConvexBody& m, const LatticePacking& b) {
  LatticePacking r = reduce_basis(m, b);
  const double f = 2.0 / m.gauge(r.u);
  return {f * r.u, f * r.v};
}

BNGon voronoi_bngon(const ConvexBody& m, const LatticePacking& b) {
  validate_packing(m, b);
  const LatticePacking r = reduce_basis(m, b);
  double reach = 2.0 * m.gauge(r.v) + 1e-9;
  for (int it = 0; it < 8; ++it) {
    BNGon gon = build_bngon(m, lattice_vectors(m, r, reach), reach);
    if (gon.bounded) {
      double far = 0.0;
      for (const Vec2& p : gon.boundary.vertices()) far = std::max(far, m.gauge(p));
      // Points farther than twice the cell's reach cannot cut the cell.
      if (2.0 * far <= reach) return gon;
      reach = 2.0 * far * (1.0 + 1e-9);
    } else {
      reach *= 2.0;
    }
  }
  throw NonConvergence("voronoi_bngon: cell did not close");
}

ArcChainRegion voronoi_cell(const ConvexBody& m, const LatticePacking& b) { return voronoi_bngon(m, b).boundary; }

namespace {

// Only lattice points within gauge 2(1+λ) can cut C ∩ (1+λ)M.
std::vector<Vec2> truncation_generators(const ConvexBody& m, const LatticePacking& b, double lambda) {
  return lattice_vectors(m, b, 2.0 * (1.0 + lambda) * (1.0 + 1e-12));
}

}  // namespace

DensityReport truncated_lattice_density(const ConvexBody& m, const LatticePacking& b, double lambda) {
  if (!(lambda >= 0.0)) throw InputError("truncated_lattice_density: lambda must be nonnegative");
  validate_packing(m, b);
  DensityReport rep;
  rep.lambda = lambda;
  rep.basis = b;
  rep.det = std::abs(lattice_det(b));
  const double big = 1.0 + lambda;
  const auto gens = truncation_generators(m, b, lambda);
  if (gens.empty()) {
    rep.truncated_cell_area = big * big * m.area();
    rep.cell = m.boundary_region(big);
  } else {
    const BNGon gon = build_bngon(m, gens, std::max(kDefaultWindow, 2.0 * big));
    rep.truncated_cell_area = truncated_area(m, gon, lambda);
    rep.cell = truncated_region(m, gon, lambda);
  }
  rep.delta_truncated = m.area() / rep.truncated_cell_area;
  rep.delta_soft = rep.truncated_cell_area / rep.det;
  rep.delta_packing = m.area() / rep.det;
  return rep;
}

double disk_closed_form(double lambda) {
  if (!(lambda >= 0.0)) throw InputError("disk_closed_form: lambda must be nonnegative");
  const double rho = 1.0 + lambda;
  if (rho >= 2.0 / std::sqrt(3.0)) return kPi / (2.0 * std::sqrt(3.0));
  const double area = kPi * rho * rho - 6.0 * (rho * rho * std::acos(1.0 / rho) - std::sqrt(rho * rho - 1.0));
  return kPi / area;
}

LatticePacking equilateral_packing(const ConvexBody& m, double theta) {
  const Vec2 a = 2.0 * m.radial(theta) * unit(theta);
  auto gap = [&](double phi) { return m.gauge(2.0 * m.radial(phi) * unit(phi) - a) - 2.0; };
  const double lo = theta + 1e-9, hi = theta + kPi;
  const double phi = numeric::bracketed_root(gap, lo, hi, gap(lo), gap(hi), 52);
  return {a, 2.0 * m.radial(phi) * unit(phi)};
}

double sampled_truncated_density(const ConvexBody& m, const LatticePacking& b, double lambda, int samples) {
  if (samples < 8) throw InputError("sampled_truncated_density: too few samples");
  const double big = 1.0 + lambda;
  const auto gens = truncation_generators(m, b, lambda);
  const double dphi = kTwoPi / samples;
  double area = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double phi = (k + 0.5) * dphi;
    const Vec2 e = unit(phi);
    const double rho = m.radial(phi);
    double r = big * rho;
    for (const Vec2& g : gens) r = bisector_ray(m, g, e, rho, r);
    area += 0.5 * r * r;
  }
  return m.area() / (area * dphi);
}

SixGonLattice sixgon_lattice(const ConvexBody& m, const std::vector<Vec2>& gens, double lambda) {
  if (gens.size() != 6) throw InputError("sixgon_lattice: need the six generators of a symmetric B-6-gon");
  SixGonLattice out;
  out.residual = HUGE_VAL;
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = gens[(k + 1) % 3], b = gens[(k + 2) % 3];
    for (const Vec2 c : {a + b, a - b, -1.0 * (a + b), b - a}) {
      const double r = m.gauge(gens[k] - c);
      if (r < out.residual) {
        out.residual = r;
        out.mismatch = gens[k] - c;
      }
    }
  }
  for (int k = 0; k < 3; ++k) {
    const LatticePacking b{gens[k], gens[(k + 1) % 3]};
    if (!(std::abs(lattice_det(b)) > 1e-12)) continue;
    if (m.gauge(shortest_vector(m, b)) < 2.0 - 1e-9) continue;
    const DensityReport rep = truncated_lattice_density(m, b, lambda);
    if (!out.valid || rep.delta_truncated > out.density) {
      out.valid = true;
      out.density = rep.delta_truncated;
      out.basis = b;
    }
  }
  out.spans_lattice = out.valid && out.residual <= 1e-6;
  return out;
}

LatticeOptimum optimize_lattice(const ConvexBody& m, double lambda, LatticeOptions opt) {
  if (!(lambda > 0.0)) throw InputError("optimize_lattice: lambda must be positive");
  LatticeOptimum out;

  DowkerOptions dopt;
  dopt.resolution = opt.resolution;
  dopt.cross_check = false;
  out.a6 = minimize_An(m, lambda, 6, dopt);
  out.dowker_density = m.area() / out.a6.value;
  out.sixgon = sixgon_lattice(m, out.a6.tiling.generators, lambda);
  if (opt.strict && !out.sixgon.spans_lattice) {
    const Vec2 v = out.sixgon.mismatch;
    char msg[240];
    std::snprintf(msg, sizeof msg,
                  "optimize_lattice: the minimizing B-6-gon is not a lattice Voronoi cell; generator mismatch "
                  "(%.9g, %.9g) has gauge %.9g",
                  v.x, v.y, out.sixgon.residual);
    throw ConstraintViolation(msg);
  }

  // Equilateral family: scan the direction of a, then refine.
  auto family = [&](double theta, int samples) {
    return sampled_truncated_density(m, equilateral_packing(m, theta), lambda, samples);
  };
  constexpr int kScan = 90;
  int best_k = 0;
  double best_v = -1.0;
  for (int k = 0; k < kScan; ++k) {
    const double v = family(kPi * k / kScan, opt.samples);
    if (v > best_v) {
      best_v = v;
      best_k = k;
    }
  }
  const double h = kPi / kScan;
  const auto peak = numeric::brent_minimize([&](double t) { return -family(t, 4 * opt.samples); },
                                            kPi * best_k / kScan - h, kPi * best_k / kScan + h);
  out.equilateral_basis = reduce_basis(m, equilateral_packing(m, peak.x));
  DensityReport best = truncated_lattice_density(m, out.equilateral_basis, lambda);
  out.equilateral_density = best.delta_truncated;
  if (out.sixgon.valid && out.sixgon.density > best.delta_truncated + 1e-12) {
    best = truncated_lattice_density(m, out.sixgon.basis, lambda);
  }

  out.search_density = std::numeric_limits<double>::quiet_NaN();
  if (opt.direct_search && opt.starts > 0) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi), spread(kPi / 6, 5 * kPi / 6), len(2.0, 3.0);
    auto objective = [&](std::span<const double> x) {
      const LatticePacking b{{x[0], x[1]}, {x[2], x[3]}};
      const double d = std::abs(lattice_det(b));
      if (!(d > 1e-6 * std::max(1e-300, norm(b.u) * norm(b.v)))) return HUGE_VAL;
      return -sampled_truncated_density(m, normalize_packing(m, b), lambda, opt.samples);
    };
    double best_search = HUGE_VAL;
    LatticePacking best_basis{};
    for (int s = 0; s < opt.starts; ++s) {
      const double t = angle(rng), dt = spread(rng), lu = len(rng), lv = len(rng);
      const Vec2 u = lu * unit(t), v = lv * unit(t + dt);
      const auto r = numeric::nelder_mead(objective, {u.x, u.y, v.x, v.y}, {0.2, 0.2, 0.2, 0.2}, 1e-7, 600);
      // Strict improvement keeps the earliest start on ties.
      if (r.value < best_search) {
        best_search = r.value;
        best_basis = normalize_packing(m, {{r.x[0], r.x[1]}, {r.x[2], r.x[3]}});
      }
    }
    out.search_basis = best_basis;
    const DensityReport rep = truncated_lattice_density(m, best_basis, lambda);
    out.search_density = rep.delta_truncated;
    if (rep.delta_truncated > best.delta_truncated + 1e-12) best = rep;
  }
  out.basis = best.basis;
  out.report = best;
  return out;
}

}  // namespace softpack
