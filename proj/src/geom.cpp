#include "softpack/geom.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "softpack/errors.hpp"

namespace softpack {

ArcChainRegion::ArcChainRegion(std::vector<std::vector<Vec2>> segments) {
  for (auto& s : segments) {
    if (!s.empty()) segments_.push_back(std::move(s));
  }
}

ArcChainRegion ArcChainRegion::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) return {};
  vertices.push_back(vertices.front());
  return ArcChainRegion({std::move(vertices)});
}

std::vector<Vec2> ArcChainRegion::vertices() const {
  std::vector<Vec2> out;
  for (const auto& seg : segments_) {
    for (const Vec2& p : seg) {
      if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
  }
  while (out.size() > 1 && norm(out.back() - out.front()) <= 1e-15) out.pop_back();
  return out;
}

bool ArcChainRegion::closed(double tol) const {
  if (segments_.empty()) return true;
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const Vec2 end = segments_[k].back();
    const Vec2 next = segments_[(k + 1) % segments_.size()].front();
    if (norm(end - next) > tol * std::max(1.0, norm(end))) return false;
  }
  return true;
}

bool ArcChainRegion::counterclockwise() const { return signed_area(*this) > 0.0; }

ArcChainRegion ArcChainRegion::reversed() const {
  std::vector<std::vector<Vec2>> segs(segments_.rbegin(), segments_.rend());
  for (auto& s : segs) std::reverse(s.begin(), s.end());
  return ArcChainRegion(std::move(segs));
}

namespace {

double shoelace(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

Vec2 centroid(const std::vector<Vec2>& v) {
  double a = 0.0;
  Vec2 c{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 p = v[i], q = v[(i + 1) % v.size()];
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  if (a == 0.0) return v.front();
  return c / (3.0 * a);
}

// Star-shaped polygon as a radial function about c.
struct Radial {
  Vec2 c;
  std::vector<double> ang;
  std::vector<Vec2> pts;

  static std::optional<Radial> make(std::vector<Vec2> v, Vec2 c) {
    if (v.size() < 3) return std::nullopt;
    if (shoelace(v) < 0.0) std::reverse(v.begin(), v.end());
    const std::size_t n = v.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = v[i] - c, b = v[(i + 1) % n] - c;
      if (cross(a, b) <= 0.0) return std::nullopt;
      total += std::atan2(cross(a, b), dot(a, b));
    }
    if (std::abs(total - kTwoPi) > 1e-6) return std::nullopt;
    Radial r{c, {}, {}};
    std::size_t start = 0;
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] = wrap_angle(polar_angle(v[i] - c));
      if (raw[i] < raw[start]) start = i;
    }
    for (std::size_t k = 0; k < n; ++k) {
      r.ang.push_back(raw[(start + k) % n]);
      r.pts.push_back(v[(start + k) % n]);
    }
    if (!std::is_sorted(r.ang.begin(), r.ang.end())) return std::nullopt;
    return r;
  }

  std::size_t piece(double phi) const {
    auto it = std::upper_bound(ang.begin(), ang.end(), phi);
    if (it == ang.begin()) return ang.size() - 1;
    return static_cast<std::size_t>(it - ang.begin()) - 1;
  }

  std::pair<Vec2, Vec2> segment(std::size_t i) const { return {pts[i], pts[(i + 1) % pts.size()]}; }

  double radius(std::size_t i, double phi) const {
    const auto [p, q] = segment(i);
    const Vec2 u = unit(phi);
    return cross(p - c, q - p) / cross(u, q - p);
  }
};

Vec2 line_intersection(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2) {
  const Vec2 d1 = q1 - p1, d2 = q2 - p2;
  const double den = cross(d1, d2);
  if (den == 0.0) return p1;
  return p1 + (cross(p2 - p1, d2) / den) * d1;
}

ArcChainRegion radial_merge(const Radial& a, const Radial& b) {
  std::vector<double> angs = a.ang;
  angs.insert(angs.end(), b.ang.begin(), b.ang.end());
  std::sort(angs.begin(), angs.end());
  angs.erase(std::unique(angs.begin(), angs.end()), angs.end());
  std::vector<Vec2> out;
  const std::size_t m = angs.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double lo = angs[k];
    const double hi = (k + 1 < m) ? angs[k + 1] : angs[0] + kTwoPi;
    const double mid = wrap_angle(0.5 * (lo + hi));
    const std::size_t ia = a.piece(mid), ib = b.piece(mid);
    const double ra0 = a.radius(ia, lo), rb0 = b.radius(ib, lo);
    const double ra1 = a.radius(ia, hi), rb1 = b.radius(ib, hi);
    out.push_back(a.c + std::min(ra0, rb0) * unit(lo));
    if ((ra0 - rb0) * (ra1 - rb1) < 0.0) {
      const auto [p1, q1] = a.segment(ia);
      const auto [p2, q2] = b.segment(ib);
      out.push_back(line_intersection(p1, q1, p2, q2));
    }
  }
  return ArcChainRegion::polygon(std::move(out));
}

std::vector<Vec2> clip_convex(std::vector<Vec2> subject, const std::vector<Vec2>& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Vec2 a = clip[e], b = clip[(e + 1) % clip.size()];
    const Vec2 d = b - a;
    std::vector<Vec2> next;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Vec2 p = subject[i], q = subject[(i + 1) % subject.size()];
      const double sp = cross(d, p - a), sq = cross(d, q - a);
      if (sp >= 0.0) next.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) next.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    subject = std::move(next);
  }
  return subject;
}

}  // namespace

double signed_area(const ArcChainRegion& region) {
  if (region.empty()) return 0.0;
  if (!region.closed()) throw MalformedRegion("signed_area: boundary is not closed");
  return shoelace(region.vertices());
}

ArcChainRegion clip_region(const ArcChainRegion& region, const ArcChainRegion& body) {
  if (region.empty() || body.empty()) return {};
  if (!body.closed() || !region.closed()) throw MalformedRegion("clip_region: boundary is not closed");
  std::vector<Vec2> bv = body.vertices();
  if (shoelace(bv) < 0.0) std::reverse(bv.begin(), bv.end());
  const Vec2 c = centroid(bv);
  auto rb = Radial::make(bv, c);
  if (!rb) throw MalformedRegion("clip_region: body is not star-shaped about its centroid");
  std::vector<Vec2> rv = region.vertices();
  if (auto ra = Radial::make(rv, c)) return radial_merge(*ra, *rb);
  if (shoelace(rv) < 0.0) std::reverse(rv.begin(), rv.end());
  auto out = clip_convex(std::move(rv), bv);
  if (out.size() < 3 || std::abs(shoelace(out)) == 0.0) return {};
  return ArcChainRegion::polygon(std::move(out));
}

bool contains(const ArcChainRegion& region, Vec2 p) {
  if (region.empty()) return false;
  const auto v = region.vertices();
  int wn = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    if (a.y <= p.y) {
      if (b.y > p.y && cross(b - a, p - a) > 0.0) ++wn;
    } else if (b.y <= p.y && cross(b - a, p - a) < 0.0) {
      --wn;
    }
  }
  return wn != 0;
}

McEstimate monte_carlo_area(const std::function<bool(Vec2)>& inside, BoundingBox box,
                            std::uint64_t samples, std::uint64_t seed) {
  if (!(box.xmax > box.xmin) || !(box.ymax > box.ymin)) {
    throw DegenerateInput("monte_carlo_area: degenerate bounding box");
  }
  if (samples == 0) throw InputError("monte_carlo_area: sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    if (inside({x, y})) ++hits;
  }
  const double a = (box.xmax - box.xmin) * (box.ymax - box.ymin);
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {a * p, a * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

std::vector<Vec2> sample_curve(const std::function<Vec2(double)>& f, double t0, double t1,
                               double tol, int initial_pieces) {
  struct Node {
    double t;
    Vec2 p;
    int depth;
  };
  std::vector<Vec2> out;
  const int pieces = std::max(1, initial_pieces);
  Vec2 prev = f(t0);
  out.push_back(prev);
  for (int k = 0; k < pieces; ++k) {
    const double a = t0 + (t1 - t0) * k / pieces;
    const double b = (k + 1 == pieces) ? t1 : t0 + (t1 - t0) * (k + 1) / pieces;
    // Depth-first refinement; the stack holds pending right endpoints.
    std::vector<Node> stack{{b, f(b), 0}};
    Node left{a, prev, 0};
    while (!stack.empty()) {
      const Node right = stack.back();
      const double tm = 0.5 * (left.t + right.t);
      const Vec2 pm = f(tm);
      const Vec2 chord = right.p - left.p;
      const double len = norm(chord);
      const double dev = len > 0.0 ? std::abs(cross(chord, pm - left.p)) / len : norm(pm - left.p);
      const int depth = std::max(left.depth, right.depth);
      if (dev <= tol * std::max(1.0, norm(pm)) || depth >= 40) {
        out.push_back(right.p);
        left = right;
        stack.pop_back();
      } else {
        stack.push_back({tm, pm, depth + 1});
      }
    }
    prev = left.p;
  }
  return out;
}

ArcChainRegion radial_region(Vec2 center, const std::function<double(double)>& r,
                             std::span<const double> breaks, double tol) {
  std::vector<double> b;
  for (double t : breaks) b.push_back(wrap_angle(t));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (b.empty()) b.push_back(0.0);
  auto curve = [&](double phi) { return center + r(phi) * unit(phi); };
  std::vector<std::vector<Vec2>> segs;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double lo = b[k];
    const double hi = (k + 1 < b.size()) ? b[k + 1] : b[0] + kTwoPi;
    const int pieces = std::max(2, static_cast<int>(std::ceil(32.0 * (hi - lo) / kTwoPi)));
    segs.push_back(sample_curve(curve, lo, hi, tol, pieces));
  }
  return ArcChainRegion(std::move(segs));
}

ArcChainRegion regular_polygon(int n, double inradius, double phase) {
  if (n < 3) throw InputError("regular_polygon: need at least 3 sides");
  const double circ = inradius / std::cos(kPi / n);
  std::vector<Vec2> v;
  for (int k = 0; k < n; ++k) v.push_back(circ * unit(phase + (2 * k + 1) * kPi / n));
  return ArcChainRegion::polygon(std::move(v));
}

ArcChainRegion disk_region(Vec2 center, double radius, double tol) {
  return radial_region(center, [radius](double) { return radius; }, {}, tol);
}

}  // namespace softpack
