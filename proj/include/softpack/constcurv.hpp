#pragma once

// Disks and triangles in the sphere (κ = +1), the Euclidean plane (κ = 0) and
// the hyperbolic plane (κ = −1), with the truncated density functionals of a
// disk relative to triangles having its center as a vertex.
//
// Embeddings: unit vectors of R³ for the sphere, (x, y, 0) for the plane, and
// the upper sheet x² + y² − z² = −1 of the hyperboloid.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "softpack/vec.hpp"

namespace softpack {

struct CurvedPoint {
  int kappa = 0;
  Vec3 coords;
};

/// Validates the embedding constraint to 1e−12 and κ ∈ {−1, 0, 1}.
CurvedPoint make_point(int kappa, Vec3 coords);
/// The base point: north pole, (0, 0), or the hyperboloid vertex.
CurvedPoint base_point(int kappa);
/// Point at geodesic distance `dist` from the base point in direction `angle`.
CurvedPoint polar_point(int kappa, double dist, double angle);
/// Point at distance t along the geodesic leaving `at` with unit tangent w.
CurvedPoint exp_map(const CurvedPoint& at, Vec3 w, double t);
/// Unit tangent at `from` pointing along the geodesic to `to`.
Vec3 direction(const CurvedPoint& from, const CurvedPoint& to);
/// Quarter turn counterclockwise in the tangent plane at p.
Vec3 rotate_tangent(const CurvedPoint& p, Vec3 v);

/// Throws InputError on mixed curvatures, ConstraintViolation on an
/// antipodal pair of the sphere.
double geodesic_distance(const CurvedPoint& a, const CurvedPoint& b);

/// Circumradius of the regular triangle with sides 2r. On the sphere r must
/// lie in (0, π/3).
double circumradius_regular_triangle(int kappa, double r);

/// Area of the disk of radius t, per unit of polar angle: 1 − cos t, t²/2, cosh t − 1.
double sector_area(int kappa, double t);

/// Boundary piece of a curved region: a geodesic segment or an arc of the
/// circle of radius `radius` about `center`.
struct CurvedPiece {
  enum class Kind { Geodesic, Arc };
  Kind kind = Kind::Geodesic;
  CurvedPoint from;
  CurvedPoint to;
  CurvedPoint center;
  double radius = 0.0;
  /// Signed central angle, positive when the center is on the left.
  double sweep = 0.0;
};

CurvedPiece geodesic_piece(const CurvedPoint& a, const CurvedPoint& b);
/// Arc from `from` to `to`; ccw means counterclockwise about the center.
CurvedPiece arc_piece(const CurvedPoint& center, double radius, const CurvedPoint& from, const CurvedPoint& to,
                      bool ccw);
CurvedPiece circle_piece(const CurvedPoint& center, double radius, double start_angle_at_center = 0.0);

/// Area of a counterclockwise closed chain. Curved planes use Gauss–Bonnet,
/// the Euclidean plane uses the chord polygon plus circular segments. Throws
/// MalformedRegion when consecutive pieces do not meet.
double region_area_curved(int kappa, std::span<const CurvedPiece> boundary);

struct CurvedTriangle {
  int kappa = 0;
  CurvedPoint v[3];
};

CurvedTriangle make_triangle(const CurvedPoint& a, const CurvedPoint& b, const CurvedPoint& c);
double triangle_area(const CurvedTriangle& t);
/// area(T ∩ B(v[0], radius)), the disk centered at the first vertex.
double vertex_disk_area(const CurvedTriangle& t, double radius);

struct SoftDiskConfig {
  double r = 0.0;
  double lambda = 0.0;
  CurvedPoint center;
};

void validate_config(const SoftDiskConfig& c);

/// ρ = area(T ∩ B)/area(T ∩ B_λ) and ρ̂ = area(T ∩ B_λ)/area(T). ρ is NaN when
/// area(T ∩ B_λ) vanishes.
struct RhoValues {
  double rho = 0.0;
  double rho_hat = 0.0;
};

/// T must have the disk center as a vertex (any position); throws
/// ConstraintViolation otherwise.
RhoValues rho_functionals(const SoftDiskConfig& c, const CurvedTriangle& t);

struct SigmaReg {
  double sigma = 0.0;
  double sigma_bar = 0.0;
};

/// Bounds from the regular triangle of side 2r with disks of radius r and
/// (1+λ)r at its vertices.
SigmaReg sigma_reg(int kappa, double r, double lambda);

/// The right triangle (q, edge midpoint, center) of the regular triangle T_r;
/// six copies tile T_r.
CurvedTriangle regular_right_triangle(int kappa, double r);

/// Triangle (q, p(s1), p(s2)) where p lies on a line through q at distance
/// `p_dist` and p(s) runs along the perpendicular half-line at p.
CurvedTriangle perpendicular_triangle(int kappa, double p_dist, double s1, double s2);

struct MonotonicityReport {
  int evaluations = 0;
  /// Largest increase of ρ (resp. ρ̂) between neighbouring grid values.
  double max_increase_rho_s1 = 0.0;
  double max_increase_rho_s2 = 0.0;
  double max_increase_rho_hat_s1 = 0.0;
  double max_increase_rho_hat_s2 = 0.0;
  int violations = 0;  // increases above tol
};

/// Evaluates ρ and ρ̂ on T(s1, s2) for every s1 < s2 drawn from the sorted
/// grid. Requires p_dist ≥ r; on the sphere every s and every vertex distance
/// must stay below π/2.
MonotonicityReport perpendicular_monotonicity(int kappa, double r, double lambda, double p_dist, std::span<const double> s_grid,
                                  double tol = 1e-8);

struct ComparisonReport {
  RhoValues t1;
  RhoValues t2;
  bool rho_holds = false;      // ρ(T1) ≥ ρ(T2) − tol
  bool rho_hat_holds = false;  // ρ̂(T1) ≥ ρ̂(T2) − tol
};

/// Right triangle (q, q', p) with |qq'| = R(r), |qp| = leg, right angle at p.
CurvedTriangle fixed_hypotenuse_triangle(int kappa, double r, double leg);

/// Requires r ≤ r1 ≤ r2 < R(r).
ComparisonReport fixed_hypotenuse_comparison(int kappa, double r, double lambda, double r1, double r2, double tol = 1e-8);

/// Triangle from the dissection of a Voronoi cell: q, and two points of a
/// line at distance h ≥ r from q, on one side of the foot of q (one of them
/// may be the foot), the far one at distance ≥ R(r). Obtuse or right.
struct AdmissibleTriangle {
  CurvedTriangle triangle;
  double foot_distance = 0.0;
  double far_distance = 0.0;
  bool right = false;
};

AdmissibleTriangle sample_admissible_triangle(int kappa, double r, std::mt19937_64& rng);

struct BoundCheck {
  int samples = 0;
  int rho_violations = 0;
  int rho_hat_violations = 0;
  double max_rho_excess = -1.0;      // max of ρ − σ_reg
  double max_rho_hat_excess = -1.0;  // max of ρ̂ − σ̄_reg
  SigmaReg bound;
};

BoundCheck check_triangle_bound(int kappa, double r, double lambda, int samples, std::uint64_t seed,
                                double tol = 1e-8);

}  // namespace softpack
