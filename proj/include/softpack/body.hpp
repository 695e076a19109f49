#pragma once

// o-symmetric convex bodies and the norm they induce.

#include <string>
#include <utility>
#include <vector>

#include "softpack/geom.hpp"
#include "softpack/vec.hpp"

namespace softpack {

inline constexpr int kDefaultResolution = 4096;
inline constexpr double kDefaultSmoothing = 0.05;

class ConvexBody {
 public:
  enum class Kind { Disk, RoundedPolygon, Sampled };

  static ConvexBody disk(double radius = 1.0);

  /// P_{-s} + sB for the convex polygon P given by its vertices: the inner
  /// parallel polygon at distance s rounded off by a disk of radius s, so the
  /// result is inscribed in P and has the same edge normals. s = 0 keeps P.
  static ConvexBody smoothed_polygon(std::vector<Vec2> vertices, double smoothing = kDefaultSmoothing);

  /// Support values h(θ0 + 2πk/N), k = 0..N-1, interpolated by periodic cubic
  /// Hermite splines. A constant sequence is recognized as a disk unless
  /// `detect_disk` is false.
  static ConvexBody from_support(std::vector<double> h, bool detect_disk = true, double theta0 = 0.0);

  static ConvexBody smoothed_square(double smoothing = kDefaultSmoothing);
  /// Regular hexagon of inradius 1 with one edge normal along the x-axis.
  static ConvexBody smoothed_hexagon(double smoothing = kDefaultSmoothing);

  Kind kind() const { return kind_; }
  double smoothing() const { return s_; }
  /// Number of support samples (Sampled) or polygon vertices; 0 for a disk.
  int resolution() const;
  const std::vector<Vec2>& inner_vertices() const { return verts_; }
  const std::vector<double>& support_samples() const { return h_; }

  double support(double theta) const;
  double support_derivative(double theta) const;

  /// min{μ ≥ 0 : x ∈ μM}.
  double gauge(Vec2 x) const;
  /// Boundary point with outer normal angle θ. On a flat edge returns the
  /// edge midpoint.
  Vec2 boundary_point(double theta) const;
  Vec2 boundary_point_for_normal(Vec2 u) const { return boundary_point(polar_angle(u)); }
  /// Outer normal angle at the boundary point in polar direction φ. On a flat
  /// edge this is the edge normal; at a corner of an unsmoothed polygon, the
  /// bisecting direction of the normal cone.
  double normal_angle_at(double phi) const;
  /// Radial function: distance from o to bd(M) in direction φ.
  double radial(double phi) const;
  /// Polar angles where the radial function is not smooth.
  std::vector<double> radial_breaks() const;
  /// Largest |x| over M.
  double circumradius() const;
  double inradius() const;

  double area() const;
  ConvexBody scaled(double factor) const;

  /// Boundary of factor·M as a sampled region.
  ArcChainRegion boundary_region(double factor = 1.0, double tol = kGeomTol) const;

  /// Support samples on a uniform grid of n angles.
  std::vector<double> sample_support(int n) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::Disk;
  double radius_ = 1.0;
  double s_ = 0.0;
  std::vector<Vec2> verts_;
  std::vector<double> normals_;  // outer normal angle of edge (i, i+1)
  std::vector<Vec2> nvec_;       // unit(normals_[i])
  std::vector<double> offset_;   // support value along normals_[i]
  std::vector<double> h_;
  std::vector<double> dh_;
  std::vector<double> polar_;  // unwrapped polar angle of boundary_point at grid angles
  double step_ = 0.0;
  double theta0_ = 0.0;

  double sampled_gauge(Vec2 x) const;
  double sampled_normal(Vec2 dir) const;
  void hermite(double theta, double& h, double& dh) const;
};

double gauge(const ConvexBody& body, Vec2 x);
Vec2 boundary_point_for_normal(const ConvexBody& body, Vec2 u);
ConvexBody scale(const ConvexBody& body, double factor);
double body_area(const ConvexBody& body);

struct SymmetryReport {
  double worst_mismatch = 0.0;
  double at_angle = 0.0;
};

/// Parses the body JSON format:
///   {"kind":"support","samples":[[theta,h],...]}
///   {"kind":"polygon","vertices":[[x,y],...],"smoothing":s}
/// Throws InputError with a line number on syntax errors and with the worst
/// antipodal mismatch when the body is not centrally symmetric.
ConvexBody parse_body_json(const std::string& text);
ConvexBody load_body_file(const std::string& path);

/// Serializes as support samples on a grid of n angles.
std::string body_to_json(const ConvexBody& body, int n = kDefaultResolution);

}  // namespace softpack
