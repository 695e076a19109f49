#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "softpack/errors.hpp"
#include "softpack/geom.hpp"

using namespace softpack;

namespace {

// area(H ∩ ρB²) for the regular hexagon of inradius 1, 1 ≤ ρ ≤ 2/√3.
double hexagon_disk_area(double rho) {
  return kPi * rho * rho - 6.0 * (rho * rho * std::acos(1.0 / rho) - std::sqrt(rho * rho - 1.0));
}

}  // namespace

TEST_CASE("unit square has area 1, reversed has area -1") {
  auto sq = ArcChainRegion::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(signed_area(sq) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(signed_area(sq.reversed()) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(sq.counterclockwise());
}

TEST_CASE("regular hexagon of inradius 1 has area 2*sqrt(3)") {
  CHECK(signed_area(regular_polygon(6, 1.0)) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
  for (int n = 3; n <= 12; ++n) {
    CHECK(signed_area(regular_polygon(n, 1.0, 0.3)) ==
          doctest::Approx(n * std::tan(kPi / n)).epsilon(1e-13));
  }
}

TEST_CASE("open chains are rejected") {
  ArcChainRegion open({{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}});
  CHECK_THROWS_AS(signed_area(open), MalformedRegion);
}

TEST_CASE("chain of several segments") {
  ArcChainRegion tri({{{0, 0}, {2, 0}}, {{2, 0}, {0, 2}}, {{0, 2}, {0, 0}}});
  CHECK(signed_area(tri) == doctest::Approx(2.0));
}

TEST_CASE("additivity under a chord split") {
  const double breaks[] = {0.0, kPi};
  auto whole = radial_region({0, 0}, [](double phi) { return 1.0 + 0.2 * std::cos(3 * phi); }, breaks);
  REQUIRE(whole.segments().size() == 2);
  double parts = 0.0;
  for (const auto& seg : whole.segments()) {
    ArcChainRegion half({seg, {seg.back(), seg.front()}});
    parts += signed_area(half);
  }
  CHECK(std::abs(parts - signed_area(whole)) <= 10 * kGeomTol);
}

TEST_CASE("clip: square by unit circle gives the disk") {
  auto sq = ArcChainRegion::polygon({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}});
  auto circle = disk_region({0, 0}, 1.0);
  CHECK(signed_area(clip_region(sq, circle)) == doctest::Approx(kPi).epsilon(1e-8));
  CHECK(signed_area(clip_region(circle, circle)) == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("clip: hexagon by circle of radius 1.1 matches the segment formula") {
  const double expected = hexagon_disk_area(1.1);
  CHECK(expected == doctest::Approx(3.4312529515578127).epsilon(1e-14));
  const double got = signed_area(clip_region(regular_polygon(6, 1.0), disk_region({0, 0}, 1.1)));
  CHECK(std::abs(got - expected) < 1e-7);
  auto mc = monte_carlo_area(
      [](Vec2 p) {
        if (norm(p) > 1.1) return false;
        for (int k = 0; k < 6; ++k) {
          if (dot(p, unit(k * kPi / 3)) > 1.0) return false;
        }
        return true;
      },
      {-1.2, -1.2, 1.2, 1.2}, 1000000, 42);
  CHECK(std::abs(mc.estimate - got) < 4 * mc.std_error);
}

TEST_CASE("clip: disjoint regions give the empty sentinel") {
  auto a = ArcChainRegion::polygon({{5, 5}, {6, 5}, {6, 6}, {5, 6}});
  auto out = clip_region(a, disk_region({0, 0}, 1.0, 1e-6));
  CHECK(out.empty());
  CHECK(signed_area(out) == 0.0);
}

TEST_CASE("clip is monotone in the scale of the clipping body") {
  auto hex = regular_polygon(6, 1.0, 0.1);
  double prev = 0.0;
  for (double rho = 0.9; rho <= 1.25; rho += 0.05) {
    const double a = signed_area(clip_region(hex, disk_region({0, 0}, rho, 1e-8)));
    CHECK(a >= prev - 1e-12);
    prev = a;
  }
}

TEST_CASE("monte carlo: unit disk within 4 sigma, empty predicate exactly 0") {
  auto mc = monte_carlo_area([](Vec2 p) { return norm(p) <= 1.0; }, {-1, -1, 1, 1}, 1000000, 1);
  CHECK(std::abs(mc.estimate - kPi) < 4 * mc.std_error);
  auto again = monte_carlo_area([](Vec2 p) { return norm(p) <= 1.0; }, {-1, -1, 1, 1}, 1000000, 1);
  CHECK(again.estimate == mc.estimate);
  auto none = monte_carlo_area([](Vec2) { return false; }, {-1, -1, 1, 1}, 1000, 1);
  CHECK(none.estimate == 0.0);
  CHECK_THROWS_AS(monte_carlo_area([](Vec2) { return true; }, {0, 0, 0, 1}, 10, 1), DegenerateInput);
}

TEST_CASE("monte carlo agrees with clipped areas on random convex pairs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(u(rng) * 6);
    const double inr = 0.6 + 0.6 * u(rng), phase = kTwoPi * u(rng);
    const double a2 = 0.1 * u(rng), k = 2 + static_cast<int>(u(rng) * 3), ph2 = kTwoPi * u(rng);
    const double base = 0.8 + 0.5 * u(rng);
    auto poly = regular_polygon(n, inr, phase);
    auto blob = radial_region({0, 0}, [&](double phi) { return base * (1 + a2 * std::cos(k * phi + ph2)); },
                              {}, 1e-7);
    auto clipped = clip_region(poly, blob);
    const double area = signed_area(clipped);
    const double box = 1.5 * base;
    auto in_blob = [&](Vec2 p) {
      const double phi = polar_angle(p);
      return norm(p) <= base * (1 + a2 * std::cos(k * phi + ph2));
    };
    auto mc = monte_carlo_area([&](Vec2 p) { return in_blob(p) && contains(poly, p); },
                               {-box, -box, box, box}, 40000, 100 + trial);
    CHECK(std::abs(mc.estimate - area) < 4 * mc.std_error + 1e-9);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("adaptive sampling meets the chord tolerance on a circle") {
  auto pts = sample_curve([](double t) { return 1.1 * unit(t); }, 0.0, kTwoPi, 1e-9);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 m = 0.5 * (pts[i] + pts[i + 1]);
    worst = std::max(worst, 1.1 - norm(m));
  }
  CHECK(worst <= 1.2e-9);
}
