#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>

#include "softpack/constcurv.hpp"
#include "softpack/errors.hpp"
#include "softpack/geom.hpp"
#include "softpack/lattice.hpp"

using namespace softpack;

namespace {

struct Mc {
  double estimate;
  double sigma;
};

// Uniform samples of the geodesic disk of radius `reach` about the base
// point, drawn by inverting the polar area element.
Mc polar_monte_carlo(int kappa, double reach, const std::function<bool(const CurvedPoint&)>& inside, int n,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double phi = kTwoPi * u(rng), v = u(rng);
    double t;
    if (kappa > 0) {
      t = std::acos(1.0 - v * (1.0 - std::cos(reach)));
    } else if (kappa < 0) {
      t = std::acosh(1.0 + v * (std::cosh(reach) - 1.0));
    } else {
      t = reach * std::sqrt(v);
    }
    if (inside(polar_point(kappa, t, phi))) ++hits;
  }
  const double total = kTwoPi * sector_area(kappa, reach), p = static_cast<double>(hits) / n;
  return {p * total, total * std::sqrt(p * (1.0 - p) / n)};
}

// Geodesics are sections by planes through the origin of R³ in both curved
// models, so a point is in the counterclockwise triangle iff it lies on the
// positive side of all three planes.
bool in_triangle(const CurvedTriangle& t, const CurvedPoint& x) {
  for (int i = 0; i < 3; ++i) {
    const Vec3 a = t.v[i].coords, b = t.v[(i + 1) % 3].coords;
    double s;
    if (t.kappa == 0) {
      s = (b.x - a.x) * (x.coords.y - a.y) - (b.y - a.y) * (x.coords.x - a.x);
    } else {
      s = dot(cross(a, b), x.coords);
    }
    if (s < 0.0) return false;
  }
  return true;
}

// Interior angle at vertex a by the law of cosines of each geometry.
double angle_at(int kappa, double opp, double s1, double s2) {
  if (kappa > 0) return std::acos((std::cos(opp) - std::cos(s1) * std::cos(s2)) / (std::sin(s1) * std::sin(s2)));
  if (kappa < 0) return std::acos((std::cosh(s1) * std::cosh(s2) - std::cosh(opp)) / (std::sinh(s1) * std::sinh(s2)));
  return std::acos((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2));
}

double angle_sum(const CurvedTriangle& t) {
  const double a = geodesic_distance(t.v[1], t.v[2]), b = geodesic_distance(t.v[0], t.v[2]),
               c = geodesic_distance(t.v[0], t.v[1]);
  return angle_at(t.kappa, a, b, c) + angle_at(t.kappa, b, a, c) + angle_at(t.kappa, c, a, b);
}

CurvedTriangle random_triangle(int kappa, double reach, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const CurvedPoint q = base_point(kappa);
  for (;;) {
    const CurvedPoint a = polar_point(kappa, reach * (0.2 + 0.8 * u(rng)), kTwoPi * u(rng));
    const CurvedPoint b = polar_point(kappa, reach * (0.2 + 0.8 * u(rng)), kTwoPi * u(rng));
    try {
      const CurvedTriangle t = make_triangle(q, a, b);
      if (triangle_area(t) > 1e-3) return t;
    } catch (const DegenerateInput&) {
    }
  }
}

// Cosine of the angle at the vertex that is neither the base point nor the
// farthest vertex.
double middle_angle_cos(const CurvedTriangle& t) {
  const CurvedPoint q = base_point(t.kappa);
  int far = 0, mid = 0;
  double dfar = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double d = geodesic_distance(q, t.v[i]);
    if (d > dfar) {
      dfar = d;
      far = i;
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (i != far && geodesic_distance(q, t.v[i]) > 0.0) mid = i;
  }
  const Vec3 a = direction(t.v[mid], q), b = direction(t.v[mid], t.v[far]);
  return t.kappa < 0 ? a.x * b.x + a.y * b.y - a.z * b.z : dot(a, b);
}

double scale_for(int kappa) { return kappa == 0 ? 1.0 : 0.4; }

}  // namespace

TEST_CASE("geodesic distance") {
  CHECK(geodesic_distance(make_point(0, {0, 0, 0}), make_point(0, {3, 4, 0})) == doctest::Approx(5.0));
  CHECK(geodesic_distance(base_point(1), make_point(1, {1, 0, 0})) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(geodesic_distance(base_point(1), make_point(1, {0, 0, -1})), ConstraintViolation);
  CHECK_THROWS_AS(geodesic_distance(base_point(1), base_point(0)), InputError);
  CHECK_THROWS_AS(make_point(1, {1, 1, 0}), ConstraintViolation);
  CHECK_THROWS_AS(make_point(-1, {0, 0, -1}), ConstraintViolation);
  CHECK_THROWS_AS(make_point(2, {0, 0, 1}), InputError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int kappa : {-1, 0, 1}) {
    for (int k = 0; k < 200; ++k) {
      CurvedPoint p[3];
      for (auto& x : p) x = polar_point(kappa, 1.3 * u(rng), kTwoPi * u(rng));
      const double ab = geodesic_distance(p[0], p[1]), bc = geodesic_distance(p[1], p[2]),
                   ac = geodesic_distance(p[0], p[2]);
      CHECK(ab == doctest::Approx(geodesic_distance(p[1], p[0])).epsilon(1e-14));
      CHECK(ac <= ab + bc + 1e-12);
    }
    // Distance along a geodesic is the parameter.
    const CurvedPoint a = polar_point(kappa, 0.7, 0.3);
    const Vec3 w = rotate_tangent(a, direction(a, base_point(kappa)));
    CHECK(geodesic_distance(a, exp_map(a, w, 0.9)) == doctest::Approx(0.9).epsilon(1e-13));
  }
}

TEST_CASE("circumradius of the regular triangle") {
  CHECK(circumradius_regular_triangle(0, 1.0) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(circumradius_regular_triangle(1, 1e-5) / 1e-5 == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(circumradius_regular_triangle(-1, 1e-5) / 1e-5 == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(circumradius_regular_triangle(1, 0.5) < kPi / 2);
  CHECK(circumradius_regular_triangle(1, kPi / 3 - 1e-9) < kPi / 2);
  CHECK_THROWS_AS(circumradius_regular_triangle(1, kPi / 3), InputError);
  CHECK_THROWS_AS(circumradius_regular_triangle(0, 0.0), InputError);
  for (int kappa : {-1, 0, 1}) {
    for (double r : {0.05, 0.4, 0.5, 1.0}) {
      if (kappa > 0 && r >= kPi / 3) continue;
      const double big = circumradius_regular_triangle(kappa, r);
      CurvedPoint p[3];
      for (int i = 0; i < 3; ++i) p[i] = polar_point(kappa, big, 0.2 + i * kTwoPi / 3);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(geodesic_distance(p[i], p[(i + 1) % 3]) - 2 * r) <= 1e-10);
    }
  }
}

TEST_CASE("Gauss-Bonnet areas of simple regions") {
  const CurvedPoint x = make_point(1, {1, 0, 0}), y = make_point(1, {0, 1, 0}), z = make_point(1, {0, 0, 1});
  const CurvedPiece octant[3] = {geodesic_piece(x, y), geodesic_piece(y, z), geodesic_piece(z, x)};
  CHECK(region_area_curved(1, octant) == doctest::Approx(kPi / 2).epsilon(1e-14));

  const CurvedPiece unit_circle = circle_piece(base_point(0), 1.0);
  CHECK(region_area_curved(0, std::span(&unit_circle, 1)) == doctest::Approx(kPi).epsilon(1e-15));
  for (int kappa : {-1, 1}) {
    const CurvedPiece c = circle_piece(polar_point(kappa, 0.6, 2.0), 0.5, 0.3);
    CHECK(region_area_curved(kappa, std::span(&c, 1)) ==
          doctest::Approx(kTwoPi * sector_area(kappa, 0.5)).epsilon(1e-13));
  }

  // Large regular hyperbolic triangles approach the ideal triangle, area π.
  // The hyperboloid model loses digits like e^d, so stay at moderate size.
  double prev = 0.0;
  for (double d : {2.0, 4.0, 6.0, 8.0}) {
    const CurvedTriangle t = make_triangle(polar_point(-1, d, 0), polar_point(-1, d, kTwoPi / 3),
                                           polar_point(-1, d, 2 * kTwoPi / 3));
    const double a = triangle_area(t);
    CHECK(a == doctest::Approx(kPi - angle_sum(t)).epsilon(1e-6));
    CHECK(a > prev);
    prev = a;
  }
  CHECK(kPi - prev < 3e-3);

  const CurvedPiece open[2] = {geodesic_piece(x, y), geodesic_piece(z, x)};
  CHECK_THROWS_AS(region_area_curved(1, open), MalformedRegion);
  CHECK_THROWS_AS(region_area_curved(1, std::span<const CurvedPiece>{}), MalformedRegion);
}

TEST_CASE("triangle areas match the angle excess and defect") {
  std::mt19937_64 rng(8);
  for (int kappa : {-1, 1}) {
    for (int k = 0; k < 100; ++k) {
      const CurvedTriangle t = random_triangle(kappa, 1.2, rng);
      CHECK(triangle_area(t) == doctest::Approx(kappa * (angle_sum(t) - kPi)).epsilon(1e-10));
    }
  }
}

TEST_CASE("disk-triangle areas agree with Monte Carlo on random regions") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int kappa : {-1, 0, 1}) {
    int outliers = 0;
    for (int k = 0; k < 50; ++k) {
      const double reach = 1.2;
      const CurvedTriangle t = random_triangle(kappa, reach, rng);
      const double rho = 0.2 + 1.0 * u(rng);
      const CurvedPoint q = t.v[0];
      const auto mc = polar_monte_carlo(
          kappa, reach, [&](const CurvedPoint& p) { return in_triangle(t, p) && geodesic_distance(q, p) <= rho; },
          40000, 100 + k);
      const double got = vertex_disk_area(t, rho);
      if (std::abs(got - mc.estimate) > 4.0 * mc.sigma + 1e-12) ++outliers;
    }
    // 4σ: expected outliers over 50 draws is well below one.
    CHECK(outliers <= 1);
  }
}

TEST_CASE("Euclidean disk-triangle areas agree with polygon clipping") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const CurvedTriangle t = random_triangle(0, 1.5, rng);
    const double rho = 0.3 + u(rng);
    std::vector<Vec2> tri;
    for (const auto& p : t.v) tri.push_back({p.coords.x, p.coords.y});
    const auto clipped = clip_region(ArcChainRegion::polygon(tri), disk_region({0, 0}, rho));
    // The clipped disk is a polyline, so the reference carries its sampling error.
    CHECK(vertex_disk_area(t, rho) == doctest::Approx(signed_area(clipped)).epsilon(0).scale(1).epsilon(3e-6));
  }
}

TEST_CASE("rho functionals on trivial configurations") {
  for (int kappa : {-1, 0, 1}) {
    const double r = scale_for(kappa);
    const SoftDiskConfig cfg{r, 0.1, base_point(kappa)};
    // T inside B.
    const auto small = make_triangle(base_point(kappa), polar_point(kappa, 0.5 * r, 0.1), polar_point(kappa, 0.6 * r, 0.9));
    const auto a = rho_functionals(cfg, small);
    CHECK(a.rho == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(a.rho_hat == doctest::Approx(1.0).epsilon(1e-13));
    // T inside B_λ but not B.
    const auto mid = make_triangle(base_point(kappa), polar_point(kappa, 1.08 * r, 0.1), polar_point(kappa, 1.05 * r, 0.5));
    const auto b = rho_functionals(cfg, mid);
    CHECK(b.rho_hat == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.rho == doctest::Approx(vertex_disk_area(mid, r) / triangle_area(mid)).epsilon(1e-13));
    CHECK(b.rho < 1.0);
    // Far side beyond (1+λ)r: both areas are sectors.
    const auto far = make_triangle(base_point(kappa), polar_point(kappa, 2 * r, 0.0), polar_point(kappa, 2 * r, 0.4));
    const auto c = rho_functionals(cfg, far);
    CHECK(c.rho == doctest::Approx(sector_area(kappa, r) / sector_area(kappa, 1.1 * r)).epsilon(1e-12));
    // Center at another vertex is accepted.
    const auto moved = make_triangle(polar_point(kappa, 2 * r, 0.0), base_point(kappa), polar_point(kappa, 2 * r, 0.4));
    CHECK(rho_functionals(cfg, moved).rho == doctest::Approx(c.rho).epsilon(1e-13));
    const auto off = make_triangle(polar_point(kappa, r, 0.0), polar_point(kappa, 2 * r, 0.2), polar_point(kappa, 2 * r, 0.4));
    CHECK_THROWS_AS(rho_functionals(cfg, off), ConstraintViolation);
  }
  CHECK_THROWS_AS(validate_config({kPi / 3, 0.1, base_point(1)}), InputError);
  CHECK_THROWS_AS(validate_config({0.4, 0.0, base_point(1)}), InputError);
}

TEST_CASE("rho functionals of a tangent right triangle match Monte Carlo") {
  // Right angle at p, legs from q of length 1.05 r toward the tangent point.
  const double r = 1.0;
  const CurvedPoint q = base_point(0), p = polar_point(0, 1.05 * r, 0.0);
  const CurvedPoint c = make_point(0, {1.05 * r, 1.05 * r, 0.0});
  const CurvedTriangle t = make_triangle(q, p, c);
  const RhoValues v = rho_functionals({r, 0.1, q}, t);
  const double reach = std::sqrt(2.0) * 1.05 * r;
  const auto in_b = polar_monte_carlo(
      0, reach, [&](const CurvedPoint& x) { return in_triangle(t, x) && geodesic_distance(q, x) <= r; }, 400000, 1);
  const auto in_bl = polar_monte_carlo(
      0, reach, [&](const CurvedPoint& x) { return in_triangle(t, x) && geodesic_distance(q, x) <= 1.1 * r; }, 400000, 2);
  CHECK(std::abs(vertex_disk_area(t, r) - in_b.estimate) <= 4 * in_b.sigma);
  CHECK(std::abs(vertex_disk_area(t, 1.1 * r) - in_bl.estimate) <= 4 * in_bl.sigma);
  CHECK(v.rho == doctest::Approx(vertex_disk_area(t, r) / vertex_disk_area(t, 1.1 * r)));
  CHECK(v.rho_hat == doctest::Approx(vertex_disk_area(t, 1.1 * r) / (0.5 * 1.05 * 1.05)).epsilon(1e-12));
}

TEST_CASE("sigma_reg") {
  // Tangent disks: three sixty-degree sectors fill half a disk.
  for (double r : {0.5, 1.0, 2.0}) {
    const CurvedTriangle t = regular_right_triangle(0, r);
    CHECK(6.0 * vertex_disk_area(t, r) == doctest::Approx(kPi * r * r / 2).epsilon(1e-13));
    CHECK(6.0 * triangle_area(t) == doctest::Approx(std::sqrt(3.0) * r * r).epsilon(1e-13));
  }
  // In the plane σ_reg is the hexagonal disk packing value.
  for (double lambda : {0.05, 0.1, 0.15, 0.2, 1.0}) {
    CHECK(sigma_reg(0, 1.0, lambda).sigma == doctest::Approx(disk_closed_form(lambda)).epsilon(1e-12));
  }
  for (int kappa : {-1, 0, 1}) {
    const double r = scale_for(kappa);
    CHECK(sigma_reg(kappa, r, 1e-10).sigma == doctest::Approx(1.0).epsilon(1e-8));
    const SigmaReg s = sigma_reg(kappa, r, 0.1);
    CHECK(s.sigma < 1.0);
    CHECK(s.sigma_bar < 1.0);

    // Monte Carlo over T_r with the three-disk unions, no dissection.
    const double big = circumradius_regular_triangle(kappa, r);
    CurvedPoint p[3];
    for (int i = 0; i < 3; ++i) p[i] = polar_point(kappa, big, i * kTwoPi / 3);
    const CurvedTriangle tr = make_triangle(p[0], p[1], p[2]);
    auto union_hit = [&](const CurvedPoint& x, double rad) {
      if (!in_triangle(tr, x)) return false;
      for (const auto& c : p) {
        if (geodesic_distance(c, x) <= rad) return true;
      }
      return false;
    };
    const int n = 400000;
    const auto hard = polar_monte_carlo(kappa, big, [&](const CurvedPoint& x) { return union_hit(x, r); }, n, 5);
    const auto soft = polar_monte_carlo(kappa, big, [&](const CurvedPoint& x) { return union_hit(x, 1.1 * r); }, n, 6);
    const auto whole = polar_monte_carlo(kappa, big, [&](const CurvedPoint& x) { return in_triangle(tr, x); }, n, 7);
    CHECK(std::abs(6.0 * vertex_disk_area(regular_right_triangle(kappa, r), r) - hard.estimate) <= 4 * hard.sigma);
    CHECK(std::abs(6.0 * vertex_disk_area(regular_right_triangle(kappa, r), 1.1 * r) - soft.estimate) <= 4 * soft.sigma);
    CHECK(std::abs(triangle_area(tr) - whole.estimate) <= 4 * whole.sigma);
    CHECK(6.0 * triangle_area(regular_right_triangle(kappa, r)) == doctest::Approx(triangle_area(tr)).epsilon(1e-12));
  }
}

TEST_CASE("monotonicity along a perpendicular half-line") {
  for (int kappa : {-1, 0, 1}) {
    const double r = scale_for(kappa);
    std::vector<double> grid;
    const double top = kappa > 0 ? 1.4 : 1.5;
    for (int i = 1; i <= 15; ++i) grid.push_back(top * i / 15.0);
    for (double p_dist : {r, 1.05 * r, 1.3 * r}) {
      const auto rep = perpendicular_monotonicity(kappa, r, 0.1, p_dist, grid);
      CHECK(rep.evaluations == 105);
      CHECK(rep.violations == 0);
      CHECK(rep.max_increase_rho_s1 <= 1e-8);
      CHECK(rep.max_increase_rho_s2 <= 1e-8);
    }
  }
  std::vector<double> g{0.1, 0.2};
  CHECK_THROWS_AS(perpendicular_monotonicity(0, 1.0, 0.1, 0.9, g), ConstraintViolation);
  std::vector<double> bad{0.2, 0.1};
  CHECK_THROWS_AS(perpendicular_monotonicity(0, 1.0, 0.1, 1.0, bad), InputError);
  std::vector<double> far{0.5, 1.6};
  CHECK_THROWS_AS(perpendicular_monotonicity(1, 0.4, 0.1, 0.4, far), InputError);
}

TEST_CASE("right triangles on a fixed hypotenuse") {
  for (int kappa : {-1, 0, 1}) {
    const double r = scale_for(kappa), big = circumradius_regular_triangle(kappa, r);
    const CurvedTriangle t = fixed_hypotenuse_triangle(kappa, r, 0.5 * (r + big));
    // Right angle at the third vertex.
    CHECK(std::abs(middle_angle_cos(t)) <= 1e-12);
    const auto eq = fixed_hypotenuse_comparison(kappa, r, 0.1, 1.02 * r, 1.02 * r);
    CHECK(eq.t1.rho == eq.t2.rho);
    CHECK(eq.rho_holds);
    CHECK(eq.rho_hat_holds);
    const auto rep = fixed_hypotenuse_comparison(kappa, r, 0.1, r, r + 0.9 * (big - r));
    CHECK(rep.rho_holds);
    CHECK(rep.rho_hat_holds);
    CHECK(rep.t1.rho > rep.t2.rho);
    // The leg r gives back the regular right triangle.
    CHECK(rep.t1.rho == doctest::Approx(sigma_reg(kappa, r, 0.1).sigma).epsilon(1e-12));
  }
  const auto plane = fixed_hypotenuse_comparison(0, 1.0, 0.1, 1.0, 1.1);
  CHECK(plane.rho_holds);
  CHECK(plane.rho_hat_holds);
  const auto sphere = fixed_hypotenuse_comparison(1, 0.4, 0.1, 0.42, 0.46);
  CHECK(sphere.rho_holds);
  CHECK(sphere.rho_hat_holds);
  // R(0.4) ≈ 0.4664 on the sphere, so a leg of 0.5 has no right triangle.
  CHECK_THROWS_AS(fixed_hypotenuse_comparison(1, 0.4, 0.1, 0.42, 0.5), ConstraintViolation);
  CHECK_THROWS_AS(fixed_hypotenuse_comparison(0, 1.0, 0.1, 1.1, 1.0), ConstraintViolation);
}

TEST_CASE("random admissible triangles respect the regular-triangle bound") {
  for (int kappa : {-1, 0, 1}) {
    const double r = scale_for(kappa);
    const auto rep = check_triangle_bound(kappa, r, 0.1, 200, 17);
    CHECK(rep.samples == 200);
    CHECK(rep.rho_violations == 0);
    CHECK(rep.rho_hat_violations == 0);

    std::mt19937_64 rng(2);
    const double big = circumradius_regular_triangle(kappa, r);
    for (int k = 0; k < 50; ++k) {
      const auto t = sample_admissible_triangle(kappa, r, rng);
      CHECK(t.foot_distance >= r);
      CHECK(t.far_distance >= big - 1e-12);
      if (kappa > 0) CHECK(t.far_distance < kPi / 2);
      for (const auto& v : t.triangle.v) {
        const double d = geodesic_distance(base_point(kappa), v);
        CHECK((d == 0.0 || d >= t.foot_distance - 1e-12));
      }
    }
  }
}
