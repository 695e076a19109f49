#pragma once

// Truncated Voronoi cells of unit balls in 3-space: the regular dodecahedron
// circumscribed about B³, spherical caps, the dodecahedral bound τ and the
// earlier bound τ̂, and Hales's linear functional on neighbour configurations.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "softpack/vec.hpp"

namespace softpack {

struct DodecConstants {
  double circumradius = 0.0;  // √3·tan(π/5)
  double midradius = 0.0;     // √(10 − 2√5)/2
  double inradius = 1.0;
};

DodecConstants dodec_constants();

inline constexpr double kHalesAlpha0 = 1.26;

/// Volume of the cap of height h cut from the ball of radius rho. Throws
/// InputError unless 0 ≤ h ≤ rho.
double cap_volume(double rho, double h);

struct CapSumReport {
  double F = 0.0;            // Σ cap_volume(1+λ, h_i)
  double sum_heights = 0.0;
  /// λ ∈ (0, r_mid − 1], every h_i ∈ [0, λ] and Σh_i ≤ 12λ.
  bool applicable = false;
  double twelve_caps = 0.0;  // 12·cap_volume(1+λ, λ)
  bool bound_holds = false;  // F ≤ twelve_caps, meaningful when applicable
  /// vol((1+λ)B³ \ D) by quadrature over the faces of D.
  double shell_volume = 0.0;
};

/// Heights outside [0, 1+λ] throw InputError; everything else is reported.
CapSumReport cap_sum_bound(double lambda, std::span<const double> heights);

/// vol(D ∩ ρB³) for the dodecahedron D circumscribed about B³, any ρ ≥ 0.
/// Integrates the radial function face by face; does not use cap formulas.
double dodecahedron_ball_volume(double rho);

/// 4π / (4π(1+λ)³ − 36π(λ² + ⅔λ³)). Requires 0 < λ ≤ r_mid − 1, where twelve
/// disjoint caps describe D ∩ (1+λ)B³.
double tau_closed_form(double lambda);
/// vol(B³)/vol(D ∩ (1+λ)B³) with the denominator by cap subtraction.
/// Requires 0 < λ ≤ r_mid − 1.
double tau_by_caps(double lambda);
/// vol(B³)/vol(D ∩ (1+λ)B³) for 0 < λ ≤ R_d − 1: the closed form up to
/// r_mid − 1 and the face quadrature beyond, where caps overlap.
double tau(double lambda);

struct TauHatConstants {
  double phi0 = 0.0;  // arctan(1/√2)
  double psi0 = 0.0;  // −arctan(√(2/3)·tan 5φ₀)
};

TauHatConstants tau_hat_constants();
/// Requires 0 < λ ≤ 2/√3 − 1.
double tau_hat(double lambda);

struct HalesReport {
  double value = 0.0;  // Σ L(‖x_i‖/2), L(t) = (α₀ − t)/(α₀ − 1)
  bool within_bound = false;  // value ≤ 12
};

/// Throws ConstraintViolation naming the first point with norm outside
/// [2, 2α₀] or pair closer than 2 (tolerance 1e−12).
HalesReport hales_functional(std::span<const Vec3> points);

struct Face3 {
  Vec3 normal;  // unit
  double distance = 0.0;
};

struct Polytope3Cell {
  std::vector<Face3> faces;
};

/// Normalizes the normals; throws ConstraintViolation when some face is
/// closer than 1 to the origin and InputError on a zero normal.
Polytope3Cell make_cell(std::vector<Face3> faces);
/// The twelve faces of D, normals along the icosahedron vertices.
Polytope3Cell dodecahedron_cell();
/// Rhombic dodecahedron: normals (±1, ±1, 0)/√2 and permutations, distance 1.
Polytope3Cell fcc_cell();

/// Caps of (rho)B³ over faces i and j are disjoint when their cones about the
/// normals are; sufficient, not necessary.
bool caps_disjoint(const Polytope3Cell& cell, double rho);

struct MonteCarloOptions {
  std::int64_t samples = 10'000'000;
  std::uint64_t seed = 20240611;
};

struct CellDensity {
  double volume_mc = 0.0;
  double volume_std_error = 0.0;
  double density_mc = 0.0;  // vol(B³)/volume_mc
  double density_std_error = 0.0;
  bool caps_disjoint = false;
  double volume_exact = 0.0;   // NaN unless caps_disjoint
  double density_exact = 0.0;  // NaN unless caps_disjoint
};

/// vol(V ∩ (1+λ)B³) by hit-or-miss, stratified by octant with one random
/// substream per octant. Requires 0 < λ ≤ r_mid − 1 and samples ≥ 8.
CellDensity truncated_cell_density(const Polytope3Cell& cell, double lambda, const MonteCarloOptions& mc = {});

struct IndirectEstimate {
  double lower = 0.0;            // 12λ
  double sum_heights = 0.0;      // NaN when no heights are given
  double upper = 0.0;            // 12(α₀ − 1) − m(α₀ − 1 − λ)
  double contradiction = 0.0;    // (m − 12)(α₀ − 1 − λ)
  bool chain_infeasible = false; // contradiction > 0, so lower ≥ upper
  bool heights_satisfy_chain = false;
};

/// Requires m > 12 and 0 < λ ≤ r_mid − 1; throws InputError otherwise.
IndirectEstimate indirect_estimate_check(int m, double lambda, std::span<const double> heights = {});

}  // namespace softpack
