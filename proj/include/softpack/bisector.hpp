#pragma once

// Bisectors in the normed plane of M, bisector n-gons and their truncated areas.

#include <optional>
#include <vector>

#include "softpack/body.hpp"
#include "softpack/geom.hpp"

namespace softpack {

inline constexpr double kDefaultWindow = 8.0;

/// Distance along the unit direction e from o to the boundary of the
/// half-region {p : ‖p‖ ≤ ‖p − g‖}, i.e. sup{t ≥ 0 : ‖te‖ ≤ ‖te − g‖}, capped
/// at `cap` (Euclidean). `rho` is the radial function of M in direction e.
double bisector_ray(const ConvexBody& m, Vec2 g, Vec2 e, double rho, double cap);

struct BisectorCurve {
  Vec2 x;
  Vec2 y;
  std::vector<Vec2> trace;
  /// Polar angles (about x) of the first and last trace point.
  double phi_begin = 0.0;
  double phi_end = 0.0;
  double max_residual = 0.0;
};

/// B(x, y) inside the window {p : ‖p − x‖ ≤ window}, as a polyline traced
/// radially from x. Throws DegenerateInput when x = y.
BisectorCurve trace_bisector(const ConvexBody& m, Vec2 x, Vec2 y, double window = kDefaultWindow);

/// Point equidistant from x, y, z in the norm of M; none for collinear input.
/// Throws DegenerateInput when two inputs coincide.
std::optional<Vec2> tripoint(const ConvexBody& m, Vec2 x, Vec2 y, Vec2 z);

struct BNGon {
  std::vector<Vec2> generators;
  /// active[i]: generator i contributes a side.
  std::vector<bool> active;
  int effective_sides = 0;
  /// Polar angles where the active generator changes, ascending.
  std::vector<double> vertex_angles;
  /// False when some direction is not cut off within the window.
  bool bounded = true;
  double window = kDefaultWindow;
  ArcChainRegion boundary;
};

/// {p : ‖p‖ ≤ ‖p − x_i‖ for all i}. Generators with ‖x_i‖ < 2 throw
/// ConstraintViolation; duplicates are merged.
BNGon build_bngon(const ConvexBody& m, std::vector<Vec2> generators, double window = kDefaultWindow);

/// Radial function of the B-n-gon about o (capped at the window).
double bngon_radius(const ConvexBody& m, const BNGon& gon, double phi);

/// area(P ∩ (1+λ)M) by quadrature of ½·min(r_P, (1+λ)ρ)² over polar angle,
/// split at every kink of the integrand.
double truncated_area(const ConvexBody& m, const BNGon& gon, double lambda);

/// P ∩ (1+λ)M as a sampled region (for plotting and cross-checks).
ArcChainRegion truncated_region(const ConvexBody& m, const BNGon& gon, double lambda,
                                double tol = kGeomTol);

}  // namespace softpack
