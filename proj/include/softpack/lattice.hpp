#pragma once

// Lattice packings of M, their Voronoi cells in the norm of M, and the
// λ-truncated lattice density.

#include <cstdint>
#include <vector>

#include "softpack/bisector.hpp"
#include "softpack/body.hpp"
#include "softpack/dowker.hpp"

namespace softpack {

struct LatticePacking {
  Vec2 u;
  Vec2 v;
};

double lattice_det(const LatticePacking& b);

/// Lagrange reduction in the norm of M: u is a shortest nonzero lattice
/// vector, v is shortest among vectors independent of u, det > 0.
LatticePacking reduce_basis(const ConvexBody& m, LatticePacking b);

/// Nonzero lattice vectors with gauge at most max_gauge.
std::vector<Vec2> lattice_vectors(const ConvexBody& m, const LatticePacking& b, double max_gauge);

/// Shortest nonzero lattice vector in the norm of M.
Vec2 shortest_vector(const ConvexBody& m, const LatticePacking& b);

/// Throws ConstraintViolation naming the offending vector when some lattice
/// vector has gauge below 2 − tol (translates of M would overlap).
void validate_packing(const ConvexBody& m, const LatticePacking& b, double tol = 1e-9);

/// The same lattice scaled so that its shortest vector has gauge 2.
LatticePacking normalize_packing(const ConvexBody& m, const LatticePacking& b);

/// Voronoi cell of o among the lattice points, as a B-n-gon.
BNGon voronoi_bngon(const ConvexBody& m, const LatticePacking& b);
ArcChainRegion voronoi_cell(const ConvexBody& m, const LatticePacking& b);

struct DensityReport {
  double lambda = 0.0;
  double delta_truncated = 0.0;  // area(M) / area(C ∩ (1+λ)M)
  double delta_soft = 0.0;       // area(C ∩ (1+λ)M) / det
  double delta_packing = 0.0;    // area(M) / det
  double truncated_cell_area = 0.0;
  double det = 0.0;
  LatticePacking basis;
  ArcChainRegion cell;  // C ∩ (1+λ)M
};

DensityReport truncated_lattice_density(const ConvexBody& m, const LatticePacking& b, double lambda);

/// π / area(H ∩ (1+λ)B²) for the regular hexagon H circumscribed about B².
double disk_closed_form(double lambda);

/// Lattice whose vectors a, b, b − a all have gauge 2, with a in direction
/// theta and b counterclockwise from a.
LatticePacking equilateral_packing(const ConvexBody& m, double theta);

struct LatticeOptions {
  int resolution = 720;  // Dowker circle discretization for A_6
  int starts = 32;       // random starts of the direct basis search
  int samples = 1024;    // polar samples of the search objective
  std::uint64_t seed = 1;
  bool direct_search = true;
  /// Throw when no lattice is formed by the generators of the minimizing
  /// symmetric B-6-gon.
  bool strict = false;
};

/// How the generators ±g0, ±g1, ±g2 of the minimizing symmetric B-6-gon sit
/// relative to a lattice.
struct SixGonLattice {
  /// min over k and sign choices of ‖g_k − (±g_i ± g_j)‖_M; zero when the
  /// generators are the six neighbours of a lattice point.
  double residual = 0.0;
  /// g_k − (±g_i ± g_j) at the minimum.
  Vec2 mismatch;
  /// The generators are the neighbours of a packing lattice, whose Voronoi
  /// cell is then the B-6-gon itself.
  bool spans_lattice = false;
  /// Best packing lattice spanned by a pair of generators, if any.
  bool valid = false;
  LatticePacking basis;
  double density = 0.0;
};

struct LatticeOptimum {
  /// Best lattice found and its exact report.
  LatticePacking basis;
  DensityReport report;
  /// area(M)/A_6 from the o-symmetric minimizing B-6-gon: an upper bound for
  /// every packing, attained by a lattice only when sixgon.spans_lattice.
  double dowker_density = 0.0;
  AnResult a6;
  SixGonLattice sixgon;
  /// Best of the equilateral family (six neighbours at gauge 2).
  double equilateral_density = 0.0;
  LatticePacking equilateral_basis;
  /// Best of the 4-parameter multistart search (NaN if disabled).
  double search_density = 0.0;
  LatticePacking search_basis;
};

SixGonLattice sixgon_lattice(const ConvexBody& m, const std::vector<Vec2>& generators, double lambda);

/// Best lattice over three routes: the B-6-gon generators, the equilateral
/// family, and a multistart simplex search over bases. The result never
/// reports a density that its lattice does not attain.
LatticeOptimum optimize_lattice(const ConvexBody& m, double lambda, LatticeOptions opt = {});

/// Truncated density from a polar rectangle rule with `samples` angles; the
/// cheap objective of the direct search.
double sampled_truncated_density(const ConvexBody& m, const LatticePacking& b, double lambda, int samples);

}  // namespace softpack
