#include "softpack/dowker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "softpack/bisector.hpp"
#include "softpack/errors.hpp"
#include "softpack/numeric.hpp"
#include "softpack/simd/kernels.hpp"

namespace softpack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec2 contact_point(const ConvexBody& m, double psi) { return m.radial(psi) * unit(psi); }

// Angles in [lo, hi] where the bisector point on the ray at φ, seen from
// g, crosses a piece boundary of M. t(φ) has a kink there.
void add_generator_kinks(const ConvexBody& m, Vec2 g, double big, double lo, double hi,
                         std::vector<double>& out) {
  const auto& breaks = m.radial_breaks();
  if (breaks.empty() || !(hi > lo)) return;
  auto seen = [&](double phi) {
    const double rho = m.radial(phi);
    const double t = bisector_ray(m, g, unit(phi), rho, big * rho);
    return polar_angle(t * unit(phi) - g);
  };
  constexpr int kScan = 48;
  double prev_phi = lo, prev = seen(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double phi = lo + (hi - lo) * k / kScan;
    const double cur = seen(phi);
    // The direction turns by less than half a turn between samples.
    const double turn = wrap_angle(cur - prev + kPi) - kPi;
    for (double b : breaks) {
      const double off = wrap_angle(b - prev + kPi) - kPi;
      const bool inside = turn > 0.0 ? (off > 0.0 && off <= turn) : (off < 0.0 && off >= turn);
      if (!inside) continue;
      auto past = [&](double x) {
        const double d = wrap_angle(seen(x) - prev + kPi) - kPi;
        return turn > 0.0 ? d < off : d > off;
      };
      out.push_back(numeric::bisect_predicate(past, prev_phi, phi, 1e-15));
    }
    prev_phi = phi;
    prev = cur;
  }
}

// Thick bisectors make the boundary radius jump where a ray leaves the tie
// region. A jump shows up as one sample step much larger than both
// neighbouring steps; bisection then pins it down.
template <class R>
void add_jumps(R&& radius, double lo, double hi, std::vector<double>& out) {
  constexpr int kScan = 512;
  std::vector<double> r(kScan + 1);
  for (int k = 0; k <= kScan; ++k) r[static_cast<std::size_t>(k)] = radius(lo + (hi - lo) * k / kScan);
  auto step = [&](int k) {
    if (k < 0 || k >= kScan) return 0.0;
    return std::abs(r[static_cast<std::size_t>(k + 1)] - r[static_cast<std::size_t>(k)]);
  };
  for (int k = 0; k < kScan; ++k) {
    const double d = step(k);
    if (d < 1e-9 || d < 4.0 * std::max(step(k - 1), step(k + 1))) continue;
    const double left = r[static_cast<std::size_t>(k)], right = r[static_cast<std::size_t>(k + 1)];
    out.push_back(numeric::bisect_predicate(
        [&](double x) {
          const double v = radius(x);
          return std::abs(v - left) < std::abs(v - right);
        },
        lo + (hi - lo) * k / kScan, lo + (hi - lo) * (k + 1) / kScan, 1e-15));
  }
}

}  // namespace

double arc_area_polar(const ConvexBody& m, double lambda, double psi_a, double psi_b, bool full) {
  if (!(lambda >= 0.0)) throw InputError("arc functional: lambda must be nonnegative");
  if (lambda == 0.0) return 0.0;
  double span = full ? kTwoPi : psi_b - psi_a;
  if (!full && (span < 0.0 || span > kTwoPi)) span = ccw_span(psi_a, psi_b);
  if (!full && span == 0.0) return 0.0;
  const double big = 1.0 + lambda;
  const Vec2 ga = 2.0 * contact_point(m, psi_a);
  const Vec2 gb = full ? ga : 2.0 * contact_point(m, psi_a + span);
  const double lo = psi_a, hi = psi_a + span;

  auto below = [&](Vec2 g, double phi) {
    const double rho = m.radial(phi);
    return bisector_ray(m, g, unit(phi), rho, big * rho) < big * rho;
  };
  // Each bisector leaves (1+λ)M within half a turn of its contact point.
  double ea = hi;
  if (hi - lo >= kPi || !below(ga, hi)) {
    ea = numeric::bisect_predicate([&](double phi) { return below(ga, phi); }, lo, std::min(hi, lo + kPi), 1e-15);
  }
  double eb = lo;
  if (hi - lo >= kPi || !below(gb, lo)) {
    eb = numeric::bisect_predicate([&](double phi) { return below(gb, phi); }, hi, std::max(lo, hi - kPi), 1e-15);
  }
  std::vector<double> breaks{ea, eb};
  for (double b : m.radial_breaks()) {
    for (double t = b + kTwoPi * std::floor((lo - b) / kTwoPi); t < hi; t += kTwoPi) {
      if (t > lo) breaks.push_back(t);
    }
  }
  add_generator_kinks(m, ga, big, lo, ea, breaks);
  add_generator_kinks(m, gb, big, eb, hi, breaks);
  auto ray = [&](Vec2 g, double phi, double rho, double cap) {
    return bisector_ray(m, g, unit(phi), rho, cap);
  };
  if (!full && eb < ea) {
    auto diff = [&](double phi) {
      const double rho = m.radial(phi);
      return ray(ga, phi, rho, big * rho) - ray(gb, phi, rho, big * rho);
    };
    const double d0 = diff(eb), d1 = diff(ea);
    if ((d0 < 0.0) != (d1 < 0.0)) breaks.push_back(numeric::bracketed_root(diff, eb, ea, d0, d1, 52));
  }
  auto radius = [&](double phi, double rho) {
    const double r = ray(ga, phi, rho, big * rho);
    return full ? r : ray(gb, phi, rho, r);
  };
  if (m.kind() != ConvexBody::Kind::Disk) {
    add_jumps([&](double phi) { return radius(phi, m.radial(phi)); }, lo, hi, breaks);
  }
  auto integrand = [&](double phi) {
    const double rho = m.radial(phi);
    const double r = radius(phi, rho);
    return 0.5 * (r - rho) * (r + rho);
  };
  // Bisector radii carry rounding at the 1e-16 relative level; the squared
  // difference is accurate to about 1e-13 pointwise.
  const double scale = big * big * m.circumradius() * m.circumradius();
  return numeric::integrate_abs(integrand, lo, hi, breaks, 1e-13, 1e-13 * scale);
}

double arc_functional(const ConvexBody& m, double lambda, Arc arc) {
  const double pa = polar_angle(m.boundary_point(arc.start));
  if (arc.full) return arc_area_polar(m, lambda, pa, pa, true);
  const double span = ccw_span(arc.start, arc.end);
  if (span == 0.0) return 0.0;
  const double pb = polar_angle(m.boundary_point(arc.end));
  // Normal order and contact order agree; flat edges may collapse an arc.
  return arc_area_polar(m, lambda, pa, pa + ccw_span(pa, pb), false);
}

double check_quadrangle(const ConvexBody& m, double lambda, double x1, double x2, double x3, double x4) {
  const double s2 = ccw_span(x1, x2), s3 = ccw_span(x1, x3), s4 = ccw_span(x1, x4);
  if (!(s2 <= s3 && s3 <= s4)) throw ConstraintViolation("check_quadrangle: arcs are not nested");
  auto f = [&](double a, double b) { return arc_functional(m, lambda, {a, b, false}); };
  return f(x1, x4) + f(x2, x3) - f(x1, x3) - f(x2, x4);
}

DowkerSolver::DowkerSolver(const ConvexBody& m, double lambda, int resolution)
    : m_(m), lambda_(lambda), nc_(resolution), nphi_(8 * resolution) {
  if (!(lambda >= 0.0)) throw InputError("dowker: lambda must be nonnegative");
  if (resolution < 8 || resolution % 2 != 0) throw InputError("dowker: resolution must be even and >= 8");
  const double big = 1.0 + lambda;
  const double dphi = kTwoPi / nphi_;
  const std::size_t np = static_cast<std::size_t>(nphi_);
  std::vector<double> rho(np), rho2(np);
  std::vector<Vec2> dir(np);
  for (std::size_t k = 0; k < np; ++k) {
    const double phi = (static_cast<double>(k) + 0.5) * dphi;
    dir[k] = unit(phi);
    rho[k] = m.radial(phi);
    rho2[k] = rho[k] * rho[k];
  }
  // sq[a][k] = min(t_a, (1+λ)ρ)² at the polar cell midpoints.
  std::vector<double> sq(static_cast<std::size_t>(nc_) * np);
  for (int a = 0; a < nc_; ++a) {
    const Vec2 g = 2.0 * contact_point(m, contact_angle(a));
    double* row = sq.data() + static_cast<std::size_t>(a) * np;
    for (std::size_t k = 0; k < np; ++k) {
      const double t = bisector_ray(m, g, dir[k], rho[k], big * rho[k]);
      row[k] = t * t;
    }
  }
  w_.assign(static_cast<std::size_t>(nc_) * nc_, 0.0);
  for (int a = 0; a < nc_; ++a) {
    const std::span<const double> sa(sq.data() + static_cast<std::size_t>(a) * np, np);
    for (int len = 1; len < nc_; ++len) {
      const int b = (a + len) % nc_;
      const std::span<const double> sb(sq.data() + static_cast<std::size_t>(b) * np, np);
      const std::size_t k0 = static_cast<std::size_t>(8 * a);
      const std::size_t k1 = static_cast<std::size_t>(8 * (a + len));
      double sum;
      if (k1 <= np) {
        sum = simd::sum_min_minus(sa.subspan(k0, k1 - k0), sb.subspan(k0, k1 - k0),
                                  std::span<const double>(rho2).subspan(k0, k1 - k0));
      } else {
        sum = simd::sum_min_minus(sa.subspan(k0), sb.subspan(k0), std::span<const double>(rho2).subspan(k0)) +
              simd::sum_min_minus(sa.first(k1 - np), sb.first(k1 - np),
                                  std::span<const double>(rho2).first(k1 - np));
      }
      w_[static_cast<std::size_t>(a) * nc_ + len] = 0.5 * dphi * sum;
    }
  }
}

double DowkerSolver::contact_angle(int index) const { return kTwoPi * index / nc_; }

std::vector<std::vector<DowkerSolver::GridTiling>> DowkerSolver::grid_dp(int n_min, int n_max, bool symmetric,
                                                                         int candidates) const {
  // Arcs are chosen from a circle of `span` contact positions; with the
  // symmetric restriction, half a circle whose arcs count twice.
  const int span = symmetric ? nc_ / 2 : nc_;
  const int kmin = symmetric ? (n_min + 1) / 2 : n_min;
  const int kmax = symmetric ? n_max / 2 : n_max;
  std::vector<std::vector<GridTiling>> out(static_cast<std::size_t>(n_max + 1));
  if (kmax < kmin || kmax < 1) return out;
  const std::size_t cols = static_cast<std::size_t>(span) + 1;
  std::vector<double> wt;  // weight rows, lengths 0..span
  wt.assign(static_cast<std::size_t>(nc_) * cols, numeric::kInf);
  for (int a = 0; a < nc_; ++a) {
    for (int len = 1; len <= span && len < nc_; ++len) {
      double v = table(a, len);
      if (symmetric) v += table((a + span) % nc_, len);
      wt[static_cast<std::size_t>(a) * cols + len] = v;
    }
  }
  auto row = [&](int abs_index, int from_len, int count) {
    return std::span<const double>(wt.data() + static_cast<std::size_t>(abs_index) * cols + from_len,
                                   static_cast<std::size_t>(count));
  };
  const int starts = symmetric ? span : nc_;
  // per_start[k][s]: best k-arc value among tilings with a breakpoint at s.
  std::vector<std::vector<double>> per_start(static_cast<std::size_t>(kmax + 1),
                                             std::vector<double>(static_cast<std::size_t>(starts), numeric::kInf));
  std::vector<double> d(static_cast<std::size_t>(kmax + 1) * cols);
  auto layer = [&](int k) { return std::span<double>(d.data() + static_cast<std::size_t>(k) * cols, cols); };
  for (int s = 0; s < starts; ++s) {
    std::fill(d.begin(), d.end(), numeric::kInf);
    layer(0)[0] = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      auto prev = layer(k - 1);
      auto cur = layer(k);
      for (int i = k - 1; i < span; ++i) {
        const double base = prev[static_cast<std::size_t>(i)];
        if (base == numeric::kInf) continue;
        simd::min_plus_relax(cur.subspan(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(span - i)),
                             row((s + i) % nc_, 1, span - i), base);
      }
      per_start[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = cur[static_cast<std::size_t>(span)];
    }
  }
  std::vector<std::int32_t> arg(static_cast<std::size_t>(kmax + 1) * cols);
  auto backtrack = [&](int k, int s) {
    std::fill(d.begin(), d.end(), numeric::kInf);
    std::fill(arg.begin(), arg.end(), -1);
    layer(0)[0] = 0.0;
    for (int j = 1; j <= k; ++j) {
      auto prev = layer(j - 1);
      auto cur = layer(j);
      std::span<std::int32_t> a(arg.data() + static_cast<std::size_t>(j) * cols, cols);
      for (int i = j - 1; i < span; ++i) {
        const double base = prev[static_cast<std::size_t>(i)];
        if (base == numeric::kInf) continue;
        simd::min_plus_relax_arg(cur.subspan(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(span - i)),
                                 a.subspan(static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(span - i)),
                                 row((s + i) % nc_, 1, span - i), base, i);
      }
    }
    std::vector<int> pos;
    int j = span;
    for (int layer_k = k; layer_k >= 1; --layer_k) {
      j = arg[static_cast<std::size_t>(layer_k) * cols + static_cast<std::size_t>(j)];
      pos.push_back(j);
    }
    std::reverse(pos.begin(), pos.end());
    std::vector<int> breaks;
    for (int p : pos) breaks.push_back(s + p);
    if (symmetric) {
      for (int p : pos) breaks.push_back(s + p + span);
    }
    return breaks;
  };
  for (int k = kmin; k <= kmax; ++k) {
    const int n = symmetric ? 2 * k : k;
    if (n < n_min || n > n_max) continue;
    const auto& vals = per_start[static_cast<std::size_t>(k)];
    std::vector<int> order(static_cast<std::size_t>(starts));
    for (int s = 0; s < starts; ++s) order[static_cast<std::size_t>(s)] = s;
    // Ascending value; equal values keep the lower start.
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
    std::vector<std::vector<int>> seen;
    auto& list = out[static_cast<std::size_t>(n)];
    for (int s : order) {
      if (static_cast<int>(list.size()) >= candidates) break;
      if (vals[static_cast<std::size_t>(s)] == numeric::kInf) break;
      auto breaks = backtrack(k, s);
      std::vector<int> key;
      for (int b : breaks) key.push_back(b % nc_);
      std::sort(key.begin(), key.end());
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      list.push_back({vals[static_cast<std::size_t>(s)], breaks});
    }
  }
  return out;
}

AnResult DowkerSolver::finish(int n, const GridTiling& g, bool symmetric, bool refine, bool cross_check) const {
  AnResult res;
  res.n = n;
  res.symmetric = symmetric;
  const double area_m = m_.area();
  res.grid_value = area_m + g.value;
  std::vector<double> psi;
  for (int b : g.breaks) psi.push_back(kTwoPi * b / nc_);
  const int count = static_cast<int>(psi.size());
  auto at = [&](int i) {
    const int q = ((i % count) + count) % count;
    return psi[static_cast<std::size_t>(q)] + kTwoPi * std::floor(static_cast<double>(i) / count);
  };
  auto arc = [&](double a, double b) { return arc_area_polar(m_, lambda_, a, b); };
  if (refine && lambda_ > 0.0) {
    const double h = kTwoPi / nc_;
    const int movable = symmetric ? count / 2 : count;
    for (int sweep = 0; sweep < 60; ++sweep) {
      double gain = 0.0;
      for (int i = 0; i < movable; ++i) {
        const double left = at(i - 1), right = at(i + 1), cur = at(i);
        const double lo = std::max(cur - 1.5 * h, left + 1e-9);
        const double hi = std::min(cur + 1.5 * h, right - 1e-9);
        if (!(hi > lo)) continue;
        auto f = [&](double x) { return arc(left, x) + arc(x, right); };
        const double before = f(cur);
        const auto best = numeric::brent_minimize(f, lo, hi, 40);
        if (best.value < before - 1e-15) {
          gain += (before - best.value) * (symmetric ? 2.0 : 1.0);
          psi[static_cast<std::size_t>(i)] = best.x;
          if (symmetric) psi[static_cast<std::size_t>(i + count / 2)] = best.x + kPi;
        }
      }
      if (gain < 1e-13) break;
    }
  }
  double total = 0.0;
  for (int i = 0; i < count; ++i) total += arc(at(i), at(i + 1));
  res.value = area_m + total;
  for (double p : psi) res.tiling.contact_angles.push_back(wrap_angle(p));
  std::sort(res.tiling.contact_angles.begin(), res.tiling.contact_angles.end());
  for (double p : res.tiling.contact_angles) {
    res.tiling.normal_angles.push_back(m_.normal_angle_at(p));
    res.tiling.generators.push_back(2.0 * contact_point(m_, p));
  }
  res.direct_area = kNaN;
  if (cross_check) {
    const auto gon = build_bngon(m_, res.tiling.generators);
    res.direct_area = truncated_area(m_, gon, lambda_);
  }
  return res;
}

std::vector<AnResult> DowkerSolver::solve(int n_min, int n_max, bool symmetric, bool refine, bool cross_check) const {
  // Near-ties between discretized tilings are common on bodies with flat
  // edges, and refinement is local, so several grid optima are refined.
  const int candidates = refine ? 4 : 1;
  auto grid = grid_dp(n_min, n_max, symmetric, candidates);
  if (!symmetric && refine) {
    // Symmetric grid optima are also valid seeds for the unrestricted search.
    const auto sym = grid_dp(n_min, n_max, true, candidates);
    for (int n = n_min; n <= n_max; ++n) {
      auto& list = grid[static_cast<std::size_t>(n)];
      const auto& extra = sym[static_cast<std::size_t>(n)];
      list.insert(list.end(), extra.begin(), extra.end());
    }
  }
  std::vector<AnResult> out;
  for (int n = n_min; n <= n_max; ++n) {
    const auto& list = grid[static_cast<std::size_t>(n)];
    if (list.empty()) continue;
    AnResult best = finish(n, list.front(), symmetric, refine, false);
    for (std::size_t c = 1; c < list.size(); ++c) {
      AnResult r = finish(n, list[c], symmetric, refine, false);
      if (r.value < best.value) best = std::move(r);
    }
    best.grid_value = m_.area() + list.front().value;
    if (cross_check) best.direct_area = truncated_area(m_, build_bngon(m_, best.tiling.generators), lambda_);
    out.push_back(std::move(best));
  }
  return out;
}

AnResult minimize_An(const ConvexBody& m, double lambda, int n, DowkerOptions opt) {
  if (n < 3) throw InputError("minimize_An: n must be at least 3");
  if (opt.resolution < 8 * n) throw InputError("minimize_An: resolution must be at least 8n");
  DowkerSolver solver(m, lambda, opt.resolution);
  auto plain = solver.solve(n, n, false, opt.refine, opt.cross_check);
  if (plain.empty()) throw NonConvergence("minimize_An: no tiling found");
  AnResult best = plain.front();
  if (opt.symmetric && n % 2 == 0) {
    auto sym = solver.solve(n, n, true, opt.refine, opt.cross_check);
    if (!sym.empty() && sym.front().value < best.value) best = sym.front();
  }
  return best;
}

DowkerTable dowker_table(const ConvexBody& m, double lambda, int n_min, int n_max, DowkerOptions opt) {
  if (n_min < 3 || n_max > 64 || n_min > n_max) throw InputError("dowker_table: n range must lie within [3, 64]");
  if (opt.resolution < 8 * n_max) throw InputError("dowker_table: resolution must be at least 8·n_max");
  DowkerSolver solver(m, lambda, opt.resolution);
  const auto plain = solver.solve(n_min, n_max, false, opt.refine, opt.cross_check);
  std::vector<AnResult> sym;
  if (opt.symmetric) sym = solver.solve(std::max(n_min, 4), n_max, true, opt.refine, opt.cross_check);
  DowkerTable table;
  table.lambda = lambda;
  table.resolution = opt.resolution;
  for (const auto& r : plain) {
    DowkerRow row;
    row.n = r.n;
    row.value = r.value;
    row.tiling = r.tiling;
    row.direct_area = r.direct_area;
    row.symmetric_value = kNaN;
    row.symmetric_agrees = false;
    for (const auto& s : sym) {
      if (s.n != r.n) continue;
      row.symmetric_value = s.value;
      row.symmetric_agrees = std::abs(s.value - r.value) <= table.tolerance;
      if (s.value < row.value) {
        row.value = s.value;
        row.tiling = s.tiling;
        row.direct_area = s.direct_area;
      }
    }
    table.rows.push_back(row);
  }
  table.min_defect = numeric::kInf;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    row.defect = kNaN;
    if (i > 0 && i + 1 < table.rows.size()) {
      row.defect = table.rows[i - 1].value + table.rows[i + 1].value - 2.0 * row.value;
      table.min_defect = std::min(table.min_defect, row.defect);
      if (row.defect < -table.tolerance) table.convex = false;
    }
    if (i > 0 && row.value > table.rows[i - 1].value + 1e-10) table.monotone = false;
  }
  return table;
}

}  // namespace softpack
