#pragma once

// Planar regions bounded by chains of sampled curve segments.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "softpack/vec.hpp"

namespace softpack {

/// Relative chord-error tolerance for adaptive curve sampling.
inline constexpr double kGeomTol = 1e-9;

/// Closed boundary made of polyline segments; segment k ends where k+1 starts.
/// An empty segment list is the empty region.
class ArcChainRegion {
 public:
  ArcChainRegion() = default;
  explicit ArcChainRegion(std::vector<std::vector<Vec2>> segments);

  static ArcChainRegion polygon(std::vector<Vec2> vertices);

  bool empty() const { return segments_.empty(); }
  const std::vector<std::vector<Vec2>>& segments() const { return segments_; }
  /// Boundary vertices in order, shared segment endpoints listed once, no
  /// repeat of the first vertex at the end.
  std::vector<Vec2> vertices() const;
  bool closed(double tol = 1e-7) const;
  bool counterclockwise() const;
  ArcChainRegion reversed() const;

 private:
  std::vector<std::vector<Vec2>> segments_;
};

/// Shoelace area of the boundary polyline; positive when counterclockwise.
/// Throws MalformedRegion when the chain is not closed. Empty region → 0.
double signed_area(const ArcChainRegion& region);

/// Intersection with a convex region. When the region is star-shaped about the
/// centroid of `body` the result is formed by merging radial functions;
/// otherwise the region is clipped edge by edge. Empty result → empty region.
ArcChainRegion clip_region(const ArcChainRegion& region, const ArcChainRegion& body);

/// Nonzero winding number test.
bool contains(const ArcChainRegion& region, Vec2 p);

struct BoundingBox {
  double xmin, ymin, xmax, ymax;
};

struct McEstimate {
  double estimate;
  double std_error;
};

/// Hit-or-miss area estimate. Throws DegenerateInput for an empty box and
/// InputError for zero samples.
McEstimate monte_carlo_area(const std::function<bool(Vec2)>& inside, BoundingBox box,
                            std::uint64_t samples, std::uint64_t seed);

/// Samples t ↦ f(t) on [t0, t1] until every chord deviates from the curve by at
/// most tol·max(1, |f|). Includes both endpoints.
std::vector<Vec2> sample_curve(const std::function<Vec2(double)>& f, double t0, double t1,
                               double tol = kGeomTol, int initial_pieces = 16);

/// Region {c + s·u(φ) : 0 ≤ s ≤ r(φ)} sampled adaptively; `breaks` are angles
/// in [0, 2π) where r may have a kink and a new segment starts.
ArcChainRegion radial_region(Vec2 center, const std::function<double(double)>& r,
                             std::span<const double> breaks = {}, double tol = kGeomTol);

/// Regular n-gon with the given inradius, first edge normal at `phase`.
ArcChainRegion regular_polygon(int n, double inradius, double phase = 0.0);

ArcChainRegion disk_region(Vec2 center, double radius, double tol = kGeomTol);

}  // namespace softpack
