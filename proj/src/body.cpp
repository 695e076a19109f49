#include "softpack/body.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "softpack/errors.hpp"
#include "softpack/numeric.hpp"

namespace softpack {

namespace {

double polygon_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

// Intersection of the lines <y, n1> = c1 and <y, n2> = c2.
Vec2 meet(Vec2 n1, double c1, Vec2 n2, double c2) {
  const double det = cross(n1, n2);
  return {(c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det};
}

}  // namespace

ConvexBody ConvexBody::disk(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("disk radius must be positive");
  ConvexBody b;
  b.kind_ = Kind::Disk;
  b.radius_ = radius;
  return b;
}

ConvexBody ConvexBody::smoothed_polygon(std::vector<Vec2> v, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("smoothing must be a nonnegative number");
  if (v.size() < 3) throw InputError("polygon needs at least 3 vertices");
  if (polygon_area(v) < 0.0) std::reverse(v.begin(), v.end());
  // Drop repeated and collinear vertices.
  for (bool changed = true; changed && v.size() >= 3;) {
    changed = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 a = v[(i + v.size() - 1) % v.size()], b = v[i], c = v[(i + 1) % v.size()];
      if (std::abs(cross(b - a, c - b)) <= 1e-14 * std::max(1.0, norm(b)) * std::max(1.0, norm(c - a))) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  const std::size_t n = v.size();
  if (n < 3) throw InputError("polygon is degenerate");
  std::vector<Vec2> nrm(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = v[(i + 1) % n] - v[i];
    if (cross(d, v[(i + 2) % n] - v[(i + 1) % n]) <= 0.0) throw InputError("polygon is not convex");
    nrm[i] = Vec2{d.y, -d.x} / norm(d);
    c[i] = dot(v[i], nrm[i]);
    if (c[i] <= 0.0) throw InputError("polygon does not contain the origin in its interior");
  }
  ConvexBody b;
  b.kind_ = Kind::RoundedPolygon;
  b.s_ = s;
  b.verts_.resize(n);
  b.normals_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = (i + n - 1) % n;
    b.verts_[i] = meet(nrm[p], c[p] - s, nrm[i], c[i] - s);
    b.normals_[i] = wrap_angle(polar_angle(nrm[i]));
  }
  b.nvec_ = nrm;
  b.offset_.resize(n);
  for (std::size_t i = 0; i < n; ++i) b.offset_[i] = c[i];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = v[(i + 1) % n] - v[i];
    if (dot(b.verts_[(i + 1) % n] - b.verts_[i], d) <= 0.0 || c[i] - s <= 0.0) {
      throw InputError("smoothing radius too large for this polygon");
    }
  }
  return b;
}

ConvexBody ConvexBody::from_support(std::vector<double> h, bool detect_disk, double theta0) {
  const std::size_t n = h.size();
  if (n < 8) throw InputError("need at least 8 support samples");
  double lo = h[0], hi = h[0];
  for (double x : h) {
    if (!std::isfinite(x) || x <= 0.0) throw InputError("support values must be positive and finite");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (detect_disk && hi - lo <= 1e-12 * hi) {
    double mean = 0.0;
    for (double x : h) mean += x;
    return disk(mean / static_cast<double>(n));
  }
  ConvexBody b;
  b.kind_ = Kind::Sampled;
  b.step_ = kTwoPi / static_cast<double>(n);
  b.theta0_ = theta0;
  const double d2 = b.step_ * b.step_;
  for (std::size_t k = 0; k < n; ++k) {
    const double curv = (h[(k + n - 1) % n] - 2.0 * h[k] + h[(k + 1) % n]) / d2 + h[k];
    if (curv < -1e-6 * hi) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "support samples are not convex near theta=%.6f (h+h''=%.3e)",
                    theta0 + b.step_ * static_cast<double>(k), curv);
      throw InputError(msg);
    }
  }
  b.h_ = std::move(h);
  b.dh_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double m2 = b.h_[(k + n - 2) % n], m1 = b.h_[(k + n - 1) % n];
    const double p1 = b.h_[(k + 1) % n], p2 = b.h_[(k + 2) % n];
    b.dh_[k] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * b.step_);
  }
  b.polar_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = theta0 + b.step_ * static_cast<double>(k);
    const double a = polar_angle(b.boundary_point(t));
    if (k == 0) {
      b.polar_[0] = a;
    } else {
      const double step = std::remainder(a - b.polar_[k - 1], kTwoPi);
      if (step <= 0.0) throw InputError("support samples do not describe a strictly convex body");
      b.polar_[k] = b.polar_[k - 1] + step;
    }
  }
  if (std::abs(b.polar_[n] - b.polar_[0] - kTwoPi) > 1e-9) {
    throw InputError("support samples do not describe a convex body");
  }
  return b;
}

ConvexBody ConvexBody::smoothed_square(double s) {
  return smoothed_polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}, s);
}

ConvexBody ConvexBody::smoothed_hexagon(double s) {
  std::vector<Vec2> v;
  const double circ = 1.0 / std::cos(kPi / 6.0);
  for (int k = 0; k < 6; ++k) v.push_back(circ * unit((2 * k + 1) * kPi / 6.0));
  return smoothed_polygon(std::move(v), s);
}

int ConvexBody::resolution() const {
  switch (kind_) {
    case Kind::Disk: return 0;
    case Kind::RoundedPolygon: return static_cast<int>(verts_.size());
    case Kind::Sampled: return static_cast<int>(h_.size());
  }
  return 0;
}

void ConvexBody::hermite(double theta, double& h, double& dh) const {
  const std::size_t n = h_.size();
  const double x = wrap_angle(theta - theta0_) / step_;
  std::size_t k = static_cast<std::size_t>(x);
  double t = x - static_cast<double>(k);
  if (k >= n) { k = n - 1; t = 1.0; }
  const std::size_t k1 = (k + 1) % n;
  const double t2 = t * t, t3 = t2 * t;
  const double a0 = 2 * t3 - 3 * t2 + 1, a1 = t3 - 2 * t2 + t, b0 = -2 * t3 + 3 * t2, b1 = t3 - t2;
  h = a0 * h_[k] + a1 * step_ * dh_[k] + b0 * h_[k1] + b1 * step_ * dh_[k1];
  const double da0 = 6 * t2 - 6 * t, da1 = 3 * t2 - 4 * t + 1, db0 = -6 * t2 + 6 * t, db1 = 3 * t2 - 2 * t;
  dh = (da0 * h_[k] + db0 * h_[k1]) / step_ + da1 * dh_[k] + db1 * dh_[k1];
}

double ConvexBody::support(double theta) const {
  switch (kind_) {
    case Kind::Disk: return radius_;
    case Kind::RoundedPolygon: {
      const Vec2 u = unit(theta);
      double best = -numeric::kInf;
      for (const Vec2& v : verts_) best = std::max(best, dot(v, u));
      return best + s_;
    }
    case Kind::Sampled: {
      double h, dh;
      hermite(theta, h, dh);
      return h;
    }
  }
  return 0.0;
}

double ConvexBody::support_derivative(double theta) const {
  switch (kind_) {
    case Kind::Disk: return 0.0;
    case Kind::RoundedPolygon: {
      const Vec2 p = boundary_point(theta);
      return dot(p, perp(unit(theta)));
    }
    case Kind::Sampled: {
      double h, dh;
      hermite(theta, h, dh);
      return dh;
    }
  }
  return 0.0;
}

Vec2 ConvexBody::boundary_point(double theta) const {
  const Vec2 u = unit(theta);
  switch (kind_) {
    case Kind::Disk: return radius_ * u;
    case Kind::RoundedPolygon: {
      const std::size_t n = verts_.size();
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (dot(verts_[i], u) > dot(verts_[best], u)) best = i;
      }
      // Flat edge facing u: return its midpoint.
      const double top = dot(verts_[best], u);
      const double tol = 1e-12 * std::max(1.0, std::abs(top));
      Vec2 p = verts_[best];
      for (std::size_t j : {(best + 1) % n, (best + n - 1) % n}) {
        if (top - dot(verts_[j], u) <= tol) {
          p = 0.5 * (verts_[best] + verts_[j]);
          break;
        }
      }
      return p + s_ * u;
    }
    case Kind::Sampled: {
      double h, dh;
      hermite(theta, h, dh);
      return h * u + dh * perp(u);
    }
  }
  return {};
}

double ConvexBody::sampled_normal(Vec2 x) const {
  const double phi = polar_angle(x);
  const double shifted = polar_[0] + wrap_angle(phi - polar_[0]);
  auto it = std::upper_bound(polar_.begin(), polar_.end(), shifted);
  std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - polar_.begin())) - 1;
  k = std::min(k, h_.size() - 1);
  const Vec2 dir = unit(phi);
  const double t0 = theta0_ + step_ * static_cast<double>(k);
  const double t1 = t0 + step_;
  auto f = [&](double t) { return cross(dir, boundary_point(t)); };
  const double f0 = f(t0), f1 = f(t1);
  double t;
  if ((f0 > 0.0) == (f1 > 0.0) && f0 != 0.0 && f1 != 0.0) {
    t = std::abs(f0) < std::abs(f1) ? t0 : t1;
  } else {
    t = numeric::bracketed_root(f, t0, t1, f0, f1, 52);
  }
  return wrap_angle(t);
}

double ConvexBody::sampled_gauge(Vec2 x) const {
  const double t = sampled_normal(x);
  const Vec2 p = boundary_point(t);
  return norm(x) / std::max(dot(p, unit(polar_angle(x))), 1e-300);
}

double ConvexBody::gauge(Vec2 x) const {
  const double r = norm(x);
  if (r == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Disk: return r / radius_;
    case Kind::RoundedPolygon: {
      const std::size_t n = verts_.size();
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) best = std::max(best, dot(x, nvec_[i]) / offset_[i]);
      if (s_ > 0.0) {
        const double xx = dot(x, x);
        for (std::size_t i = 0; i < n; ++i) {
          const Vec2 v = verts_[i];
          const double xv = dot(x, v);
          const double disc = xv * xv - xx * (dot(v, v) - s_ * s_);
          if (disc < 0.0) continue;
          const double w = (xv + std::sqrt(disc)) / xx;
          if (!(w > 0.0)) continue;
          // Arc at vertex i spans the normal cone between edges i-1 and i.
          const Vec2 d = w * x - v;
          if (cross(nvec_[(i + n - 1) % n], d) >= 0.0 && cross(d, nvec_[i]) >= 0.0) {
            best = std::max(best, 1.0 / w);
          }
        }
      }
      return best;
    }
    case Kind::Sampled: return sampled_gauge(x);
  }
  return 0.0;
}

double ConvexBody::normal_angle_at(double phi) const {
  switch (kind_) {
    case Kind::Disk: return wrap_angle(phi);
    case Kind::RoundedPolygon: {
      const Vec2 p = radial(phi) * unit(phi);
      const std::size_t n = verts_.size();
      // Pieces are tested in order edge i, then arc at vertex i+1.
      double best_gap = numeric::kInf, best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 nu = unit(normals_[i]);
        const double gap = std::abs(dot(p - verts_[i], nu) - s_);
        const double along = dot(p - verts_[i], perp(nu));
        const double len = norm(verts_[(i + 1) % n] - verts_[i]);
        if (along >= -1e-12 && along <= len + 1e-12 && gap < best_gap) {
          best_gap = gap;
          best = normals_[i];
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double lo = normals_[(i + n - 1) % n], hi = normals_[i];
        double a;
        if (s_ > 0.0) {
          const Vec2 d = p - verts_[i];
          const double gap = std::abs(norm(d) - s_);
          a = wrap_angle(polar_angle(d));
          if (gap >= best_gap || ccw_span(lo, a) > ccw_span(lo, hi)) continue;
          best_gap = gap;
        } else {
          if (norm(p - verts_[i]) > 1e-12 * std::max(1.0, norm(p))) continue;
          a = wrap_angle(lo + 0.5 * ccw_span(lo, hi));
          best_gap = 0.0;
        }
        best = a;
      }
      return wrap_angle(best);
    }
    case Kind::Sampled: return sampled_normal(unit(phi));
  }
  return 0.0;
}

double ConvexBody::radial(double phi) const {
  if (kind_ == Kind::Disk) return radius_;
  return 1.0 / gauge(unit(phi));
}

std::vector<double> ConvexBody::radial_breaks() const {
  std::vector<double> out;
  if (kind_ != Kind::RoundedPolygon) return out;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 v = verts_[i];
    if (s_ == 0.0) {
      out.push_back(wrap_angle(polar_angle(v)));
      continue;
    }
    out.push_back(wrap_angle(polar_angle(v + s_ * unit(normals_[(i + n - 1) % n]))));
    out.push_back(wrap_angle(polar_angle(v + s_ * unit(normals_[i]))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ConvexBody::circumradius() const {
  switch (kind_) {
    case Kind::Disk: return radius_;
    case Kind::RoundedPolygon: {
      double m = 0.0;
      for (const Vec2& v : verts_) m = std::max(m, norm(v));
      return m + s_;
    }
    case Kind::Sampled: {
      double m = 0.0;
      for (std::size_t k = 0; k < h_.size(); ++k) {
        m = std::max(m, std::hypot(h_[k], dh_[k]));
      }
      return m * (1.0 + 1e-9);
    }
  }
  return 0.0;
}

double ConvexBody::inradius() const {
  switch (kind_) {
    case Kind::Disk: return radius_;
    case Kind::RoundedPolygon: {
      double m = numeric::kInf;
      for (std::size_t i = 0; i < verts_.size(); ++i) {
        m = std::min(m, dot(verts_[i], unit(normals_[i])) + s_);
      }
      return m;
    }
    case Kind::Sampled: return *std::min_element(h_.begin(), h_.end()) * (1.0 - 1e-9);
  }
  return 0.0;
}

double ConvexBody::area() const {
  switch (kind_) {
    case Kind::Disk: return kPi * radius_ * radius_;
    case Kind::RoundedPolygon: {
      double perim = 0.0;
      for (std::size_t i = 0; i < verts_.size(); ++i) {
        perim += norm(verts_[(i + 1) % verts_.size()] - verts_[i]);
      }
      return polygon_area(verts_) + perim * s_ + kPi * s_ * s_;
    }
    case Kind::Sampled: {
      // 4-point Gauss-Legendre is exact for the cubic interpolant.
      static constexpr double x[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                      0.9305681557970263};
      static constexpr double w[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                      0.1739274225687269};
      double total = 0.0;
      for (std::size_t k = 0; k < h_.size(); ++k) {
        for (int j = 0; j < 4; ++j) {
          double h, dh;
          hermite(theta0_ + step_ * (static_cast<double>(k) + x[j]), h, dh);
          total += w[j] * (h * h - dh * dh);
        }
      }
      return 0.5 * total * step_;
    }
  }
  return 0.0;
}

ConvexBody ConvexBody::scaled(double f) const {
  if (!(f > 0.0) || !std::isfinite(f)) throw InputError("scale factor must be positive");
  ConvexBody b = *this;
  b.radius_ *= f;
  b.s_ *= f;
  for (Vec2& v : b.verts_) v *= f;
  for (double& c : b.offset_) c *= f;
  for (double& h : b.h_) h *= f;
  for (double& d : b.dh_) d *= f;
  return b;
}

ArcChainRegion ConvexBody::boundary_region(double factor, double tol) const {
  const auto breaks = radial_breaks();
  return radial_region({0.0, 0.0}, [&](double phi) { return factor * radial(phi); }, breaks, tol);
}

std::vector<double> ConvexBody::sample_support(int n) const {
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) h[static_cast<std::size_t>(k)] = support(kTwoPi * k / n);
  return h;
}

std::string ConvexBody::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::Disk: std::snprintf(buf, sizeof buf, "disk r=%.6g", radius_); break;
    case Kind::RoundedPolygon:
      std::snprintf(buf, sizeof buf, "rounded polygon (%zu sides, s=%.6g)", verts_.size(), s_);
      break;
    case Kind::Sampled: std::snprintf(buf, sizeof buf, "support samples N=%zu", h_.size()); break;
  }
  return buf;
}

double gauge(const ConvexBody& body, Vec2 x) { return body.gauge(x); }
Vec2 boundary_point_for_normal(const ConvexBody& body, Vec2 u) { return body.boundary_point_for_normal(u); }
ConvexBody scale(const ConvexBody& body, double factor) { return body.scaled(factor); }
double body_area(const ConvexBody& body) { return body.area(); }

namespace {

using nlohmann::json;

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::vector<std::pair<double, double>> read_pairs(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError(std::string("body JSON: missing array \"") + key + "\"");
  }
  std::vector<std::pair<double, double>> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InputError(std::string("body JSON: entries of \"") + key + "\" must be [number, number]");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

[[noreturn]] void asymmetric(const SymmetryReport& r) {
  char msg[200];
  std::snprintf(msg, sizeof msg,
                "body is not centrally symmetric: worst antipodal mismatch %.3e at angle %.6f",
                r.worst_mismatch, r.at_angle);
  throw InputError(msg);
}

}  // namespace

ConvexBody parse_body_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("body JSON syntax error at line " + std::to_string(line_of(text, e.byte)) +
                     ": " + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw InputError("body JSON: expected an object with a string field \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "support") {
    auto samples = read_pairs(j, "samples");
    const std::size_t n = samples.size();
    if (n < 8 || n % 2 != 0) throw InputError("body JSON: need an even number (>= 8) of samples");
    std::sort(samples.begin(), samples.end());
    const double step = kTwoPi / static_cast<double>(n);
    const double theta0 = samples[0].first;
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(samples[k].first - (theta0 + step * static_cast<double>(k))) > 1e-9) {
        throw InputError("body JSON: support samples must lie on a uniform angular grid");
      }
      h[k] = samples[k].second;
    }
    SymmetryReport rep;
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double d = std::abs(h[k] - h[k + n / 2]);
      if (d > rep.worst_mismatch) rep = {d, samples[k].first};
    }
    if (rep.worst_mismatch > 1e-12 * std::max(1.0, *std::max_element(h.begin(), h.end()))) asymmetric(rep);
    return ConvexBody::from_support(std::move(h), true, theta0);
  }
  if (kind == "polygon") {
    const auto pairs = read_pairs(j, "vertices");
    double s = kDefaultSmoothing;
    if (j.contains("smoothing")) {
      if (!j.at("smoothing").is_number()) throw InputError("body JSON: \"smoothing\" must be a number");
      s = j.at("smoothing").get<double>();
    }
    std::vector<Vec2> v;
    for (auto [x, y] : pairs) v.push_back({x, y});
    const std::size_t n = v.size();
    if (n < 4 || n % 2 != 0) throw InputError("body JSON: a symmetric polygon needs an even vertex count");
    SymmetryReport rep;
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double d = norm(v[k] + v[k + n / 2]);
      if (d > rep.worst_mismatch) rep = {d, wrap_angle(polar_angle(v[k]))};
    }
    if (rep.worst_mismatch > 1e-12) asymmetric(rep);
    return ConvexBody::smoothed_polygon(std::move(v), s);
  }
  throw InputError("body JSON: unknown kind \"" + kind + "\"");
}

ConvexBody load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open body file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_body_json(ss.str());
}

std::string body_to_json(const ConvexBody& body, int n) {
  json samples = json::array();
  const auto h = body.sample_support(n);
  for (int k = 0; k < n; ++k) samples.push_back({kTwoPi * k / n, h[static_cast<std::size_t>(k)]});
  return json{{"kind", "support"}, {"samples", samples}}.dump();
}

}  // namespace softpack
