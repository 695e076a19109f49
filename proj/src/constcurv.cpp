#include "softpack/constcurv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "softpack/errors.hpp"

namespace softpack {

namespace {

void check_kappa(int kappa) {
  if (kappa < -1 || kappa > 1) throw InputError("curvature must be -1, 0 or 1");
}

// The ambient bilinear form: Euclidean on the sphere and plane, Minkowski
// (x, y, −z) on the hyperboloid.
double form(int kappa, Vec3 a, Vec3 b) { return kappa < 0 ? a.x * b.x + a.y * b.y - a.z * b.z : dot(a, b); }

Vec3 tangent_unit(int kappa, Vec3 v) {
  const double n2 = form(kappa, v, v);
  if (!(n2 > 0.0)) throw DegenerateInput("zero tangent vector");
  return v / std::sqrt(n2);
}

Vec3 project_tangent(const CurvedPoint& p, Vec3 v) {
  if (p.kappa == 0) return {v.x, v.y, 0.0};
  // ⟨p, p⟩ = κ on both curved models.
  return v - (form(p.kappa, v, p.coords) / p.kappa) * p.coords;
}

Vec3 renormalize(int kappa, Vec3 x) {
  if (kappa > 0) return normalized(x);
  if (kappa < 0) return x / std::sqrt(-form(kappa, x, x));
  return {x.x, x.y, 0.0};
}

void same_kappa(const CurvedPoint& a, const CurvedPoint& b) {
  if (a.kappa != b.kappa) throw InputError("points live in different planes");
}

// Geodesic curvature times arc length for a full turn of unit angle about the center.
double circle_turning(int kappa, double radius) {
  if (kappa > 0) return std::cos(radius);
  if (kappa < 0) return std::cosh(radius);
  return 1.0;
}

Vec3 start_tangent(const CurvedPiece& p) {
  if (p.kind == CurvedPiece::Kind::Geodesic) return direction(p.from, p.to);
  const Vec3 u = direction(p.from, p.center);
  return p.sweep >= 0.0 ? -1.0 * rotate_tangent(p.from, u) : rotate_tangent(p.from, u);
}

Vec3 end_tangent(const CurvedPiece& p) {
  if (p.kind == CurvedPiece::Kind::Geodesic) return -1.0 * direction(p.to, p.from);
  const Vec3 u = direction(p.to, p.center);
  return p.sweep >= 0.0 ? -1.0 * rotate_tangent(p.to, u) : rotate_tangent(p.to, u);
}

bool degenerate(const CurvedPiece& p) {
  if (p.kind == CurvedPiece::Kind::Arc) return std::abs(p.sweep) < 1e-13;
  return geodesic_distance(p.from, p.to) < 1e-13;
}

// Offset along a line at distance h from q of the point at distance d from q.
double offset_for_distance(int kappa, double h, double d) {
  if (kappa > 0) return std::acos(std::clamp(std::cos(d) / std::cos(h), -1.0, 1.0));
  if (kappa < 0) return std::acosh(std::max(1.0, std::cosh(d) / std::cosh(h)));
  return std::sqrt(std::max(0.0, d * d - h * h));
}

double max_vertex_distance(int kappa, double r) {
  // Vertices of spherical Voronoi cells stay within π/2 of q; elsewhere a
  // margin beyond R(r) is enough to exercise obtuse and long triangles.
  if (kappa > 0) return 0.5 * kPi - 1e-3;
  return circumradius_regular_triangle(kappa, r) + 1.5 * r + 0.5;
}

}  // namespace

CurvedPoint make_point(int kappa, Vec3 c) {
  check_kappa(kappa);
  if (!(std::isfinite(c.x) && std::isfinite(c.y) && std::isfinite(c.z))) throw InputError("non-finite coordinates");
  if (kappa > 0 && std::abs(dot(c, c) - 1.0) > 1e-12) throw ConstraintViolation("point is not on the unit sphere");
  if (kappa == 0 && c.z != 0.0) throw ConstraintViolation("planar point must have z = 0");
  if (kappa < 0 && (c.z <= 0.0 || std::abs(form(kappa, c, c) + 1.0) > 1e-12 * std::max(1.0, c.z * c.z))) {
    throw ConstraintViolation("point is not on the upper hyperboloid sheet");
  }
  return {kappa, c};
}

CurvedPoint base_point(int kappa) {
  check_kappa(kappa);
  return {kappa, kappa == 0 ? Vec3{} : Vec3{0.0, 0.0, 1.0}};
}

CurvedPoint polar_point(int kappa, double dist, double angle) {
  const Vec3 w{std::cos(angle), std::sin(angle), 0.0};
  return exp_map(base_point(kappa), w, dist);
}

CurvedPoint exp_map(const CurvedPoint& at, Vec3 w, double t) {
  switch (at.kappa) {
    case 1: return {1, renormalize(1, std::cos(t) * at.coords + std::sin(t) * w)};
    case -1: return {-1, renormalize(-1, std::cosh(t) * at.coords + std::sinh(t) * w)};
    default: return {0, at.coords + t * w};
  }
}

Vec3 direction(const CurvedPoint& from, const CurvedPoint& to) {
  same_kappa(from, to);
  if (from.kappa == 0) return tangent_unit(0, to.coords - from.coords);
  return tangent_unit(from.kappa, project_tangent(from, to.coords));
}

Vec3 rotate_tangent(const CurvedPoint& p, Vec3 v) {
  if (p.kappa == 0) return {-v.y, v.x, 0.0};
  const Vec3 c = cross(p.coords, v);
  return p.kappa > 0 ? c : Vec3{c.x, c.y, -c.z};
}

double geodesic_distance(const CurvedPoint& a, const CurvedPoint& b) {
  same_kappa(a, b);
  const Vec3 d = a.coords - b.coords;
  switch (a.kappa) {
    case 1:
      if (dot(a.coords, b.coords) < -1.0 + 1e-12) throw ConstraintViolation("antipodal points on the sphere");
      return std::atan2(norm(cross(a.coords, b.coords)), dot(a.coords, b.coords));
    case -1: return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, form(-1, d, d))));
    default: return norm(d);
  }
}

double circumradius_regular_triangle(int kappa, double r) {
  check_kappa(kappa);
  if (!(r > 0.0)) throw InputError("circumradius: r must be positive");
  // Right triangle (center, vertex, edge midpoint): angle π/3 at the center,
  // hypotenuse R, opposite leg r.
  const double s60 = std::sqrt(3.0) / 2.0;
  if (kappa > 0) {
    if (!(r < kPi / 3.0)) throw InputError("circumradius: on the sphere r must be below pi/3");
    return std::asin(std::min(1.0, std::sin(r) / s60));
  }
  if (kappa < 0) return std::asinh(std::sinh(r) / s60);
  return r / s60;
}

double sector_area(int kappa, double t) {
  if (kappa > 0) return 2.0 * std::pow(std::sin(0.5 * t), 2);
  if (kappa < 0) return 2.0 * std::pow(std::sinh(0.5 * t), 2);
  return 0.5 * t * t;
}

CurvedPiece geodesic_piece(const CurvedPoint& a, const CurvedPoint& b) {
  same_kappa(a, b);
  CurvedPiece p;
  p.kind = CurvedPiece::Kind::Geodesic;
  p.from = a;
  p.to = b;
  return p;
}

CurvedPiece arc_piece(const CurvedPoint& center, double radius, const CurvedPoint& from, const CurvedPoint& to,
                      bool ccw) {
  same_kappa(center, from);
  same_kappa(center, to);
  if (!(radius > 0.0)) throw InputError("arc radius must be positive");
  for (const CurvedPoint* p : {&from, &to}) {
    if (std::abs(geodesic_distance(center, *p) - radius) > 1e-9 * std::max(1.0, radius)) {
      throw ConstraintViolation("arc endpoint is not on the circle");
    }
  }
  const Vec3 u1 = direction(center, from), u2 = direction(center, to);
  double ang = std::atan2(form(center.kappa, rotate_tangent(center, u1), u2), form(center.kappa, u1, u2));
  // Rounding can flip a vanishing arc to a full turn; treat tiny wrong-way
  // angles as zero.
  if (ccw) {
    ang = ang < -1e-9 ? ang + kTwoPi : std::max(ang, 0.0);
  } else {
    ang = ang > 1e-9 ? ang - kTwoPi : std::min(ang, 0.0);
  }
  CurvedPiece p;
  p.kind = CurvedPiece::Kind::Arc;
  p.from = from;
  p.to = to;
  p.center = center;
  p.radius = radius;
  p.sweep = ang;
  return p;
}

CurvedPiece circle_piece(const CurvedPoint& center, double radius, double start_angle) {
  if (!(radius > 0.0)) throw InputError("circle radius must be positive");
  Vec3 ref{1.0, 0.0, 0.0};
  if (center.kappa > 0 && std::abs(center.coords.x) > 0.9) ref = {0.0, 1.0, 0.0};
  const Vec3 e1 = tangent_unit(center.kappa, project_tangent(center, ref));
  const Vec3 e2 = rotate_tangent(center, e1);
  const CurvedPoint s = exp_map(center, std::cos(start_angle) * e1 + std::sin(start_angle) * e2, radius);
  CurvedPiece p;
  p.kind = CurvedPiece::Kind::Arc;
  p.from = s;
  p.to = s;
  p.center = center;
  p.radius = radius;
  p.sweep = kTwoPi;
  return p;
}

double region_area_curved(int kappa, std::span<const CurvedPiece> boundary) {
  check_kappa(kappa);
  if (boundary.empty()) throw MalformedRegion("empty boundary");
  const std::size_t n = boundary.size();
  for (std::size_t k = 0; k < n; ++k) {
    const CurvedPiece& a = boundary[k];
    const CurvedPiece& b = boundary[(k + 1) % n];
    if (a.from.kappa != kappa || a.to.kappa != kappa) throw InputError("piece curvature mismatch");
    if (norm(a.to.coords - b.from.coords) > 1e-9 * std::max(1.0, norm(a.to.coords))) {
      throw MalformedRegion("open boundary: consecutive pieces do not meet");
    }
  }
  std::vector<const CurvedPiece*> live;
  for (const CurvedPiece& p : boundary) {
    if (!degenerate(p)) live.push_back(&p);
  }
  if (live.empty()) return 0.0;

  if (kappa == 0) {
    double twice = 0.0, bulge = 0.0;
    for (const CurvedPiece* p : live) {
      twice += p->from.coords.x * p->to.coords.y - p->to.coords.x * p->from.coords.y;
      if (p->kind == CurvedPiece::Kind::Arc) {
        const double s = std::abs(p->sweep);
        const double seg = 0.5 * p->radius * p->radius * (s - std::sin(s));
        bulge += p->sweep > 0.0 ? seg : -seg;
      }
    }
    return 0.5 * twice + bulge;
  }

  double turning = 0.0;
  for (std::size_t k = 0; k < live.size(); ++k) {
    const CurvedPiece& a = *live[k];
    const CurvedPiece& b = *live[(k + 1) % live.size()];
    if (a.kind == CurvedPiece::Kind::Arc) turning += circle_turning(kappa, a.radius) * a.sweep;
    const Vec3 tin = end_tangent(a), tout = start_tangent(b);
    turning += std::atan2(form(kappa, rotate_tangent(a.to, tin), tout), form(kappa, tin, tout));
  }
  return (kTwoPi - turning) / kappa;
}

CurvedTriangle make_triangle(const CurvedPoint& a, const CurvedPoint& b, const CurvedPoint& c) {
  same_kappa(a, b);
  same_kappa(a, c);
  const double ab = geodesic_distance(a, b), ac = geodesic_distance(a, c);
  geodesic_distance(b, c);
  if (ab < 1e-14 || ac < 1e-14) throw DegenerateInput("triangle has coincident vertices");
  const Vec3 u = direction(a, b), v = direction(a, c);
  const double s = form(a.kappa, rotate_tangent(a, u), v);
  if (std::abs(s) < 1e-14) throw DegenerateInput("triangle vertices are collinear");
  return s > 0.0 ? CurvedTriangle{a.kappa, {a, b, c}} : CurvedTriangle{a.kappa, {a, c, b}};
}

double triangle_area(const CurvedTriangle& t) {
  const CurvedPiece pieces[3] = {geodesic_piece(t.v[0], t.v[1]), geodesic_piece(t.v[1], t.v[2]),
                                 geodesic_piece(t.v[2], t.v[0])};
  return region_area_curved(t.kappa, pieces);
}

double vertex_disk_area(const CurvedTriangle& t, double rho) {
  const int kappa = t.kappa;
  if (!(rho > 0.0)) return 0.0;
  if (kappa > 0 && !(rho < 0.5 * kPi)) throw InputError("vertex_disk_area: spherical radius must be below pi/2");
  const CurvedPoint &q = t.v[0], &a = t.v[1], &b = t.v[2];
  const double da = geodesic_distance(q, a), db = geodesic_distance(q, b), len = geodesic_distance(a, b);
  const Vec3 w = direction(a, b);

  // Interval of arc length s along [a, b] with distance to q at most rho.
  double lo = 1.0, hi = 0.0;
  if (kappa > 0) {
    const double A = dot(q.coords, a.coords), B = dot(q.coords, w), R = std::hypot(A, B);
    if (R >= std::cos(rho)) {
      double s0 = std::atan2(B, A);
      const double half = std::acos(std::min(1.0, std::cos(rho) / R));
      // Place the window on the branch nearest the segment.
      s0 += kTwoPi * std::round((0.5 * len - s0) / kTwoPi);
      lo = s0 - half;
      hi = s0 + half;
    }
  } else if (kappa < 0) {
    const double A = -form(-1, q.coords, a.coords), B = -form(-1, q.coords, w);
    const double m = std::sqrt(std::max(1.0, A * A - B * B));
    if (m <= std::cosh(rho)) {
      const double s0 = std::atanh(std::clamp(-B / A, -1.0, 1.0));
      const double half = std::acosh(std::max(1.0, std::cosh(rho) / m));
      lo = s0 - half;
      hi = s0 + half;
    }
  } else {
    const Vec3 d = a.coords - q.coords;
    const double s0 = -dot(d, w), h2 = dot(d, d) - s0 * s0;
    if (h2 <= rho * rho) {
      const double half = std::sqrt(std::max(0.0, rho * rho - h2));
      lo = s0 - half;
      hi = s0 + half;
    }
  }
  const bool in_a = da <= rho, in_b = db <= rho;
  const double s_lo = in_a ? 0.0 : std::clamp(lo, 0.0, len);
  const double s_hi = in_b ? len : std::clamp(hi, 0.0, len);
  const bool has_seg = in_a || in_b || (hi > lo && s_hi - s_lo > 1e-13);

  const CurvedPoint pa = in_a ? a : exp_map(q, direction(q, a), rho);
  const CurvedPoint pb = in_b ? b : exp_map(q, direction(q, b), rho);
  std::vector<CurvedPiece> pieces;
  pieces.push_back(geodesic_piece(q, pa));
  if (has_seg) {
    const CurvedPoint p1 = in_a ? a : exp_map(a, w, s_lo);
    const CurvedPoint p2 = in_b ? b : exp_map(a, w, s_hi);
    // Crossing points come from the distance equation; snap them onto the
    // circle so the arc check sees rounding only.
    const CurvedPoint c1 = in_a ? p1 : exp_map(q, direction(q, p1), rho);
    const CurvedPoint c2 = in_b ? p2 : exp_map(q, direction(q, p2), rho);
    if (!in_a) pieces.push_back(arc_piece(q, rho, pa, c1, true));
    pieces.push_back(geodesic_piece(c1, c2));
    if (!in_b) pieces.push_back(arc_piece(q, rho, c2, pb, true));
  } else {
    pieces.push_back(arc_piece(q, rho, pa, pb, true));
  }
  pieces.push_back(geodesic_piece(pb, q));
  return region_area_curved(kappa, pieces);
}

void validate_config(const SoftDiskConfig& c) {
  check_kappa(c.center.kappa);
  if (!(c.r > 0.0)) throw InputError("soft disk: r must be positive");
  if (!(c.lambda > 0.0)) throw InputError("soft disk: lambda must be positive");
  if (c.center.kappa > 0) {
    if (!(c.r < kPi / 3.0)) throw InputError("soft disk: on the sphere r must be below pi/3");
    if (!((1.0 + c.lambda) * c.r < 0.5 * kPi)) throw InputError("soft disk: on the sphere (1+lambda)r must be below pi/2");
  }
}

RhoValues rho_functionals(const SoftDiskConfig& c, const CurvedTriangle& t) {
  validate_config(c);
  if (t.kappa != c.center.kappa) throw InputError("rho_functionals: curvature mismatch");
  int k = -1;
  for (int i = 0; i < 3; ++i) {
    if (geodesic_distance(t.v[i], c.center) < 1e-12) k = i;
  }
  if (k < 0) throw ConstraintViolation("rho_functionals: the disk center is not a vertex of the triangle");
  // Cyclic rotation keeps the orientation.
  const CurvedTriangle rt{t.kappa, {t.v[k], t.v[(k + 1) % 3], t.v[(k + 2) % 3]}};
  const double inner = vertex_disk_area(rt, c.r);
  const double outer = vertex_disk_area(rt, (1.0 + c.lambda) * c.r);
  const double area = triangle_area(rt);
  RhoValues out;
  out.rho = outer > 0.0 ? inner / outer : std::numeric_limits<double>::quiet_NaN();
  out.rho_hat = outer / area;
  return out;
}

CurvedTriangle regular_right_triangle(int kappa, double r) {
  const double big = circumradius_regular_triangle(kappa, r);
  const CurvedPoint c = base_point(kappa);
  const CurvedPoint p1 = polar_point(kappa, big, 0.0), p2 = polar_point(kappa, big, kTwoPi / 3.0);
  const CurvedPoint m = exp_map(p1, direction(p1, p2), r);
  return make_triangle(p1, m, c);
}

SigmaReg sigma_reg(int kappa, double r, double lambda) {
  // Each point of T_r lies in the Voronoi region of its nearest vertex, and a
  // disk about another vertex reaching it also covers it from the nearest
  // one. So ∪B_i ∩ T_r and ∪B_i′ ∩ T_r split into six congruent copies of the
  // single-disk pieces in the right triangle (p1, midpoint, center).
  const CurvedTriangle t = regular_right_triangle(kappa, r);
  const RhoValues v = rho_functionals({r, lambda, t.v[0]}, t);
  return {v.rho, v.rho_hat};
}

CurvedTriangle perpendicular_triangle(int kappa, double p_dist, double s1, double s2) {
  if (!(p_dist > 0.0) || !(s1 >= 0.0) || !(s2 > s1)) throw InputError("perpendicular_triangle: need p_dist > 0, 0 <= s1 < s2");
  if (kappa > 0 && !(p_dist < 0.5 * kPi && s2 < 0.5 * kPi)) {
    throw InputError("perpendicular_triangle: on the sphere distances must be below pi/2");
  }
  const CurvedPoint q = base_point(kappa), p = polar_point(kappa, p_dist, 0.0);
  const Vec3 w = rotate_tangent(p, -1.0 * direction(p, q));
  return make_triangle(q, exp_map(p, w, s1), exp_map(p, w, s2));
}

MonotonicityReport perpendicular_monotonicity(int kappa, double r, double lambda, double p_dist, std::span<const double> s_grid,
                                  double tol) {
  if (!(p_dist >= r)) throw ConstraintViolation("perpendicular_monotonicity: p must lie outside the interior of B");
  if (s_grid.size() < 2) throw InputError("perpendicular_monotonicity: grid needs at least two values");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1]))) {
      throw InputError("perpendicular_monotonicity: grid must be positive and increasing");
    }
  }
  const std::size_t n = s_grid.size();
  const SoftDiskConfig cfg{r, lambda, base_point(kappa)};
  std::vector<RhoValues> v(n * n);
  MonotonicityReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      v[i * n + j] = rho_functionals(cfg, perpendicular_triangle(kappa, p_dist, s_grid[i], s_grid[j]));
      ++rep.evaluations;
    }
  }
  auto note = [&](double inc, double& slot) {
    slot = std::max(slot, inc);
    if (inc > tol) ++rep.violations;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      note(v[i * n + j + 1].rho - v[i * n + j].rho, rep.max_increase_rho_s2);
      note(v[i * n + j + 1].rho_hat - v[i * n + j].rho_hat, rep.max_increase_rho_hat_s2);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i + 1 < j; ++i) {
      note(v[(i + 1) * n + j].rho - v[i * n + j].rho, rep.max_increase_rho_s1);
      note(v[(i + 1) * n + j].rho_hat - v[i * n + j].rho_hat, rep.max_increase_rho_hat_s1);
    }
  }
  return rep;
}

CurvedTriangle fixed_hypotenuse_triangle(int kappa, double r, double leg) {
  const double big = circumradius_regular_triangle(kappa, r);
  if (!(leg > 0.0 && leg < big)) throw InputError("fixed_hypotenuse_triangle: need 0 < leg < R(r)");
  double c;
  if (kappa > 0) {
    c = std::tan(leg) / std::tan(big);
  } else if (kappa < 0) {
    c = std::tanh(leg) / std::tanh(big);
  } else {
    c = leg / big;
  }
  const double alpha = std::acos(std::clamp(c, -1.0, 1.0));
  return make_triangle(base_point(kappa), polar_point(kappa, big, 0.0), polar_point(kappa, leg, alpha));
}

ComparisonReport fixed_hypotenuse_comparison(int kappa, double r, double lambda, double r1, double r2, double tol) {
  const double big = circumradius_regular_triangle(kappa, r);
  if (!(r <= r1 && r1 <= r2 && r2 < big)) throw ConstraintViolation("fixed_hypotenuse_comparison: need r <= r1 <= r2 < R(r)");
  const SoftDiskConfig cfg{r, lambda, base_point(kappa)};
  ComparisonReport rep;
  rep.t1 = rho_functionals(cfg, fixed_hypotenuse_triangle(kappa, r, r1));
  rep.t2 = rho_functionals(cfg, fixed_hypotenuse_triangle(kappa, r, r2));
  rep.rho_holds = rep.t1.rho >= rep.t2.rho - tol;
  rep.rho_hat_holds = rep.t1.rho_hat >= rep.t2.rho_hat - tol;
  return rep;
}

AdmissibleTriangle sample_admissible_triangle(int kappa, double r, std::mt19937_64& rng) {
  const double big = circumradius_regular_triangle(kappa, r);
  const double dmax = max_vertex_distance(kappa, r);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double h = r + (dmax - r) * u(rng);
    const double dmin = std::max(big, h);
    if (dmin >= dmax) continue;
    const bool right = u(rng) < 1.0 / 3.0;
    double d1 = h, d2 = dmin + (dmax - dmin) * u(rng);
    if (!right) {
      d1 = dmin + (dmax - dmin) * u(rng);
      if (d1 > d2) std::swap(d1, d2);
    }
    const double x1 = right ? 0.0 : offset_for_distance(kappa, h, d1);
    const double x2 = offset_for_distance(kappa, h, d2);
    if (x2 - x1 < 1e-6) continue;
    const double turn = kTwoPi * u(rng);
    const CurvedPoint q = base_point(kappa), foot = polar_point(kappa, h, turn);
    const Vec3 w = rotate_tangent(foot, -1.0 * direction(foot, q));
    AdmissibleTriangle out;
    out.triangle = make_triangle(q, exp_map(foot, w, x1), exp_map(foot, w, x2));
    out.foot_distance = h;
    out.far_distance = d2;
    out.right = right;
    return out;
  }
  throw NonConvergence("sample_admissible_triangle: rejection sampling failed");
}

BoundCheck check_triangle_bound(int kappa, double r, double lambda, int samples, std::uint64_t seed, double tol) {
  if (samples < 0) throw InputError("check_triangle_bound: negative sample count");
  BoundCheck out;
  out.bound = sigma_reg(kappa, r, lambda);
  const SoftDiskConfig cfg{r, lambda, base_point(kappa)};
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    const AdmissibleTriangle t = sample_admissible_triangle(kappa, r, rng);
    const RhoValues v = rho_functionals(cfg, t.triangle);
    const double e1 = v.rho - out.bound.sigma, e2 = v.rho_hat - out.bound.sigma_bar;
    out.max_rho_excess = k == 0 ? e1 : std::max(out.max_rho_excess, e1);
    out.max_rho_hat_excess = k == 0 ? e2 : std::max(out.max_rho_hat_excess, e2);
    if (!(e1 <= tol)) ++out.rho_violations;
    if (!(e2 <= tol)) ++out.rho_hat_violations;
    ++out.samples;
  }
  return out;
}

}  // namespace softpack
