#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "softpack/dowker.hpp"
#include "softpack/errors.hpp"
#include "softpack/simd/kernels.hpp"

using namespace softpack;

namespace {

const ConvexBody& hexagon() {
  static const ConvexBody h = ConvexBody::smoothed_hexagon(0.05);
  return h;
}

double disk_An(int n, double lambda) { return kPi + n * oracle::disk_arc_area(kTwoPi / n, 1.0 + lambda); }

}  // namespace

TEST_CASE("disk arc functional matches the tangent-line formula") {
  const auto d = ConvexBody::disk();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> start(0.0, kTwoPi), len(0.0, 3.0);
  for (double lambda : {0.05, 0.1, 0.3}) {
    for (int k = 0; k < 25; ++k) {
      const double a = start(rng), l = len(rng);
      const double got = arc_functional(d, lambda, {a, wrap_angle(a + l)});
      CHECK(got == doctest::Approx(oracle::disk_arc_area(l, 1.0 + lambda)).epsilon(0).scale(1).epsilon(1e-12));
    }
  }
  // Large λ, a sixth of the circle: a sixth of hexagon minus disk.
  CHECK(arc_functional(d, 0.2, {0.4, 0.4 + kPi / 3}) ==
        doctest::Approx((2.0 * std::sqrt(3.0) - kPi) / 6.0).epsilon(1e-12));
  // One generator over the whole circle.
  CHECK(arc_functional(d, 0.1, {1.0, 1.0, true}) == doctest::Approx(oracle::disk_arc_area(kTwoPi, 1.1)).epsilon(1e-12));
}

TEST_CASE("degenerate arcs and zero lambda give zero") {
  CHECK(arc_functional(hexagon(), 0.1, {0.7, 0.7}) == 0.0);
  CHECK(arc_functional(hexagon(), 0.0, {0.7, 2.0}) == 0.0);
  CHECK(arc_area_polar(ConvexBody::disk(), 0.1, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(arc_functional(hexagon(), -0.1, {0.7, 2.0}), InputError);
}

TEST_CASE("arc functional on the smoothed hexagon matches a ray-scan oracle") {
  const auto& m = hexagon();
  const double lambda = 0.1;
  for (auto [a, b] : {std::pair{0.2, 1.4}, {0.0, kPi / 3}, {1.1, 2.9}, {-0.4, 0.6}}) {
    const Vec2 ga = 2.0 * m.radial(a) * unit(a), gb = 2.0 * m.radial(b) * unit(b);
    const double want = oracle::polar_scan_area(m, {ga, gb}, 1.0 + lambda, a, b, 8000, 300);
    CHECK(arc_area_polar(m, lambda, a, b) == doctest::Approx(want).epsilon(0).scale(1).epsilon(2e-6));
  }
  // The smoothed square has thick bisectors when a contact sits at an edge midpoint.
  const auto sq = ConvexBody::smoothed_square(0.1);
  const double a = 3.076142806640006, b = 1.5 * kPi;
  const double want = oracle::polar_scan_area(
      sq, {2.0 * sq.radial(a) * unit(a), 2.0 * sq.radial(b) * unit(b)}, 1.15, a, b, 8000, 300);
  CHECK(arc_area_polar(sq, 0.15, a, b) == doctest::Approx(want).epsilon(0).scale(1).epsilon(2e-6));
}

TEST_CASE("quadrangle inequality holds on random nested arcs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const ConvexBody* m : {&hexagon()}) {
    for (int k = 0; k < 20; ++k) {
      const double x1 = kTwoPi * u(rng);
      double s[3] = {u(rng), u(rng), u(rng)};
      std::sort(s, s + 3);
      const double span = 0.3 + 2.5 * u(rng);
      const double d = check_quadrangle(*m, 0.1, x1, wrap_angle(x1 + span * s[0]), wrap_angle(x1 + span * s[1]),
                                        wrap_angle(x1 + span * s[2]));
      CHECK(d >= -1e-8);
    }
  }
  const auto d = ConvexBody::disk();
  CHECK(check_quadrangle(d, 0.1, 0.2, 0.2, 1.5, 1.5) == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-15));
  // Degenerate inner arc: superadditivity.
  CHECK(check_quadrangle(d, 0.1, 0.2, 1.0, 1.0, 2.5) >= 0.0);
  CHECK_THROWS_AS(check_quadrangle(d, 0.1, 0.0, 2.0, 1.0, 3.0), ConstraintViolation);
}

TEST_CASE("disk minimizers reproduce regular circumscribed polygons") {
  const auto d = ConvexBody::disk();
  DowkerOptions opt;
  opt.resolution = 240;
  const auto r6 = minimize_An(d, 0.1, 6, opt);
  CHECK(r6.value == doctest::Approx(3.4312529515578127).epsilon(1e-12));
  CHECK(r6.value == doctest::Approx(oracle::hexagon_disk_area(1.1)).epsilon(1e-12));
  CHECK(r6.direct_area == doctest::Approx(r6.value).epsilon(1e-9));
  // The arc area is linear in the angle once both tangent lines leave 1.1B²,
  // so every tiling with all gaps in that range is optimal, the regular one
  // among them.
  REQUIRE(r6.tiling.contact_angles.size() == 6);
  for (int i = 0; i < 6; ++i) {
    const double gap = ccw_span(r6.tiling.contact_angles[i], r6.tiling.contact_angles[(i + 1) % 6]);
    CHECK(gap >= 2.0 * std::acos(1.0 / 1.1) - 1e-9);
  }
  CHECK(minimize_An(d, 0.2, 6, opt).value == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));

  opt.resolution = 512;
  opt.cross_check = false;
  const auto r64 = minimize_An(d, 0.1, 64, opt);
  CHECK(r64.value > kPi);
  CHECK(r64.value == doctest::Approx(disk_An(64, 0.1)).epsilon(1e-10));
  CHECK(r64.value - kPi < 0.01);
}

TEST_CASE("disk table: linear while truncated, classical once truncation is inactive") {
  const auto d = ConvexBody::disk();
  DowkerOptions opt;
  opt.resolution = 720;
  const auto t = dowker_table(d, 0.1, 3, 10, opt);
  REQUIRE(t.rows.size() == 8);
  for (const auto& row : t.rows) CHECK(row.value == doctest::Approx(disk_An(row.n, 0.1)).epsilon(1e-10));
  CHECK(t.convex);
  CHECK(t.monotone);
  CHECK(t.min_defect >= -1e-6);

  const auto big = dowker_table(d, 0.2, 6, 10, opt);
  for (const auto& row : big.rows) {
    CHECK(row.value == doctest::Approx(row.n * std::tan(kPi / row.n)).epsilon(1e-8));
    if (row.n % 2 == 0) CHECK(row.symmetric_agrees);
  }
}

TEST_CASE("smoothed hexagon table is convex with agreeing symmetric optimum") {
  DowkerOptions opt;
  opt.resolution = 240;
  const auto t = dowker_table(hexagon(), 0.1, 3, 8, opt);
  CHECK(t.convex);
  CHECK(t.monotone);
  for (const auto& row : t.rows) {
    CHECK(row.value >= hexagon().area());
    CHECK(row.direct_area == doctest::Approx(row.value).epsilon(1e-8));
    if (row.n % 2 == 0) CHECK(row.symmetric_agrees);
  }
  // M tiles the plane up to its rounded corners, so the hexagonal cell is untruncated.
  CHECK(t.rows[3].n == 6);
  CHECK(t.rows[3].value == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("discretized tables agree between scalar and AVX2 kernels") {
  if (!simd::isa_available(simd::Isa::Avx2)) return;
  const auto before = simd::active_isa();
  simd::force_isa(simd::Isa::Scalar);
  const DowkerSolver a(hexagon(), 0.1, 96);
  const auto ra = a.solve(3, 6, false, false, false);
  simd::force_isa(simd::Isa::Avx2);
  const DowkerSolver b(hexagon(), 0.1, 96);
  const auto rb = b.solve(3, 6, false, false, false);
  simd::force_isa(before);
  for (int i = 0; i < 96; ++i) {
    for (int len = 1; len < 96; len += 7) CHECK(std::abs(a.table(i, len) - b.table(i, len)) <= 1e-13);
  }
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].grid_value == doctest::Approx(rb[i].grid_value).epsilon(1e-13));
    CHECK(ra[i].tiling.contact_angles == rb[i].tiling.contact_angles);
  }
}

TEST_CASE("input validation") {
  const auto d = ConvexBody::disk();
  CHECK_THROWS_AS(minimize_An(d, 0.1, 2), InputError);
  DowkerOptions opt;
  opt.resolution = 40;
  CHECK_THROWS_AS(minimize_An(d, 0.1, 6, opt), InputError);
  CHECK_THROWS_AS(dowker_table(d, 0.1, 3, 65), InputError);
  CHECK_THROWS_AS(dowker_table(d, 0.1, 8, 5), InputError);
  CHECK_THROWS_AS(DowkerSolver(d, 0.1, 7), InputError);
}
