#pragma once

// Truncated areas of bisector n-gons circumscribed about M, minimized as a
// tiling problem on the circle of contact directions.

#include <cstdint>
#include <vector>

#include "softpack/body.hpp"

namespace softpack {

/// Counterclockwise arc of outer normal directions from `start` to `end`.
/// `full` marks the whole circle starting and ending at `start`.
struct Arc {
  double start = 0.0;
  double end = 0.0;
  bool full = false;
};

/// area((1+λ)M ∩ R(arc)): the region outside M between the bisectors
/// B(o, 2p_start) and B(o, 2p_end), over the boundary arc of M from p_start
/// to p_end. Zero for a degenerate arc.
double arc_functional(const ConvexBody& m, double lambda, Arc arc);

/// As arc_functional with the arc given by the polar angles of its two
/// contact points p_a, p_b on bd(M) instead of normals.
double arc_area_polar(const ConvexBody& m, double lambda, double psi_a, double psi_b, bool full = false);

/// f(x̂1x̂4) + f(x̂2x̂3) − f(x̂1x̂3) − f(x̂2x̂4) for normal angles with
/// x̂2x̂3 ⊂ x̂1x̂4. Throws ConstraintViolation when the arcs are not nested.
double check_quadrangle(const ConvexBody& m, double lambda, double x1, double x2, double x3, double x4);

struct Tiling {
  /// Polar angles of the contact points, counterclockwise.
  std::vector<double> contact_angles;
  /// Outer normal angles at the contact points.
  std::vector<double> normal_angles;
  /// Generators 2p_i of the bisector n-gon.
  std::vector<Vec2> generators;
};

struct DowkerOptions {
  int resolution = 720;
  /// Run the restricted o-symmetric search as well, for even n.
  bool symmetric = true;
  bool refine = true;
  /// Rebuild each optimal B-n-gon and measure its truncated area directly.
  bool cross_check = true;
};

struct AnResult {
  int n = 0;
  double value = 0.0;       // area(M) + Σ exact arc areas after refinement
  double grid_value = 0.0;  // the discretized optimum before refinement
  /// Truncated area of the B-n-gon built from the tiling (NaN if skipped).
  double direct_area = 0.0;
  bool symmetric = false;
  Tiling tiling;
};

/// Precomputed discretization of the arc functional for one (M, λ).
class DowkerSolver {
 public:
  DowkerSolver(const ConvexBody& m, double lambda, int resolution = 720);

  int resolution() const { return nc_; }
  double lambda() const { return lambda_; }
  /// Discretized arc value between contact grid indices a and a+len.
  double table(int a, int len) const { return w_[static_cast<std::size_t>(a) * nc_ + len]; }
  double contact_angle(int index) const;

  /// Optimal discretized tilings for every n in [n_min, n_max].
  std::vector<AnResult> solve(int n_min, int n_max, bool symmetric, bool refine, bool cross_check) const;

 private:
  ConvexBody m_;
  double lambda_;
  int nc_;
  int nphi_;
  std::vector<double> w_;  // nc × nc, row a, column len

  struct GridTiling {
    double value;
    std::vector<int> breaks;
  };
  /// For each n, the best few distinct discretized tilings, best first.
  std::vector<std::vector<GridTiling>> grid_dp(int n_min, int n_max, bool symmetric, int candidates) const;
  AnResult finish(int n, const GridTiling& g, bool symmetric, bool refine, bool cross_check) const;
};

/// A_n(M, λ) with its minimizing tiling. Throws InputError for n < 3 or a
/// resolution below 8n.
AnResult minimize_An(const ConvexBody& m, double lambda, int n, DowkerOptions opt = {});

struct DowkerRow {
  int n = 0;
  double value = 0.0;
  /// A_{n-1} + A_{n+1} − 2A_n; NaN at the ends of the range.
  double defect = 0.0;
  /// For even n: optimum over o-symmetric tilings (NaN for odd n).
  double symmetric_value = 0.0;
  bool symmetric_agrees = false;
  double direct_area = 0.0;
  Tiling tiling;
};

struct DowkerTable {
  double lambda = 0.0;
  int resolution = 0;
  double tolerance = 1e-6;
  std::vector<DowkerRow> rows;
  double min_defect = 0.0;
  bool convex = true;
  bool monotone = true;
};

/// A_n for n_min ≤ n ≤ n_max (within [3, 64]) with convexity diagnostics.
DowkerTable dowker_table(const ConvexBody& m, double lambda, int n_min, int n_max, DowkerOptions opt = {});

}  // namespace softpack
