#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "clipper/clipper.hpp"

namespace milaps {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kCoordTol = 1e-9;    // point-equality / on-boundary tolerance [m]
inline constexpr double kClipScale = 1e6;    // doubles -> clipper integer grid
inline constexpr double kSliverRel = 1e-9;   // sliver area cutoff, relative to bbox area

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(b - a); }
inline Point normalized(Point a) {
  double n = norm(a);
  return n > 0.0 ? Point{a.x / n, a.y / n} : Point{0.0, 0.0};
}
inline bool near(Point a, Point b, double tol = kCoordTol) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

/// Absolute heading change between two directions, in [0, pi].
inline double turn_angle(double dir_in, double dir_out) {
  return std::abs(wrap_angle(dir_out - dir_in));
}

using Ring = std::vector<Point>;

/// Signed ring area; positive for counterclockwise rings.
inline double signed_ring_area(const Ring& r) {
  double a = 0.0;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    const Point& p = r[i];
    const Point& q = r[(i + 1) % n];
    a += cross(p, q);
  }
  return 0.5 * a;
}

struct BBox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void expand(Point p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  void expand(const BBox& o) {
    min_x = std::min(min_x, o.min_x);
    min_y = std::min(min_y, o.min_y);
    max_x = std::max(max_x, o.max_x);
    max_y = std::max(max_y, o.max_y);
  }
  bool empty() const { return min_x > max_x; }
  double width() const { return empty() ? 0.0 : max_x - min_x; }
  double height() const { return empty() ? 0.0 : max_y - min_y; }
  double area() const { return width() * height(); }
  double diagonal() const { return std::hypot(width(), height()); }
};

inline BBox ring_bbox(const Ring& r) {
  BBox b;
  for (const Point& p : r) b.expand(p);
  return b;
}

/// One connected component of a region: outer ring (ccw) plus hole rings (cw).
struct PolygonWithHoles {
  Ring outer;
  std::vector<Ring> holes;
};

/// A multipolygon-with-holes set; may be empty. Components are pairwise
/// interior-disjoint.
struct Region {
  std::vector<PolygonWithHoles> parts;

  bool empty() const { return parts.empty(); }
};

inline double area(const Region& r) {
  double a = 0.0;
  for (const PolygonWithHoles& part : r.parts) {
    a += std::abs(signed_ring_area(part.outer));
    for (const Ring& h : part.holes) a -= std::abs(signed_ring_area(h));
  }
  return a;
}

inline BBox region_bbox(const Region& r) {
  BBox b;
  for (const PolygonWithHoles& part : r.parts) b.expand(ring_bbox(part.outer));
  return b;
}

// ---------------------------------------------------------------------------
// Point / segment predicates
// ---------------------------------------------------------------------------

inline double point_segment_distance(Point p, Point a, Point b) {
  Point ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 <= 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

/// Winding number of ring around p; nonzero means inside (for simple rings).
inline int winding_number(const Ring& r, Point p) {
  int wn = 0;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    const Point& a = r[i];
    const Point& b = r[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && cross(b - a, p - a) > 0.0) ++wn;
    } else {
      if (b.y <= p.y && cross(b - a, p - a) < 0.0) --wn;
    }
  }
  return wn;
}

inline bool point_in_ring(const Ring& r, Point p, double tol = kCoordTol) {
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    if (point_segment_distance(p, r[i], r[(i + 1) % n]) <= tol) return true;
  }
  return winding_number(r, p) != 0;
}

/// Closed-set containment test: boundary points count as inside.
inline bool point_in_region(const Region& reg, Point p, double tol = kCoordTol) {
  for (const PolygonWithHoles& part : reg.parts) {
    if (!point_in_ring(part.outer, p, tol)) continue;
    bool in_hole = false;
    for (const Ring& h : part.holes) {
      bool on_hole_boundary = false;
      for (std::size_t i = 0, n = h.size(); i < n; ++i) {
        if (point_segment_distance(p, h[i], h[(i + 1) % n]) <= tol) {
          on_hole_boundary = true;
          break;
        }
      }
      if (on_hole_boundary) continue;  // hole boundary belongs to the set
      if (winding_number(h, p) != 0) {
        in_hole = true;
        break;
      }
    }
    if (!in_hole) return true;
  }
  return false;
}

struct SegmentHit {
  double t = 0.0;  // parameter on segment (a1,a2)
  double s = 0.0;  // parameter on segment (b1,b2)
};

/// Proper or touching intersection of segments (a1,a2) and (b1,b2).
/// Collinear overlaps are reported through `overlap` as up to two parameters
/// on the first segment. Returns true when any contact exists.
inline bool segment_intersection(Point a1, Point a2, Point b1, Point b2, SegmentHit* hit,
                                 std::vector<double>* overlap = nullptr, double tol = kCoordTol) {
  Point r = a2 - a1;
  Point s = b2 - b1;
  double denom = cross(r, s);
  Point qp = b1 - a1;
  double len_r = norm(r);
  double len_s = norm(s);
  double cross_qp_r = cross(qp, r);
  if (std::abs(denom) <= tol * std::max(1.0, len_r * len_s)) {
    // parallel; check collinearity
    if (std::abs(cross_qp_r) > tol * std::max(1.0, len_r)) return false;
    if (!overlap) return false;
    if (len_r <= tol) return false;
    double t0 = dot(qp, r) / dot(r, r);
    double t1 = dot(b2 - a1, r) / dot(r, r);
    if (t0 > t1) std::swap(t0, t1);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t0 > t1) return false;
    overlap->push_back(t0);
    overlap->push_back(t1);
    return true;
  }
  double t = cross(qp, s) / denom;
  double u = cross_qp_r / denom;
  double eps_t = tol / std::max(len_r, tol);
  double eps_u = tol / std::max(len_s, tol);
  if (t < -eps_t || t > 1.0 + eps_t || u < -eps_u || u > 1.0 + eps_u) return false;
  if (hit) {
    hit->t = std::clamp(t, 0.0, 1.0);
    hit->s = std::clamp(u, 0.0, 1.0);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Polygonal environment
// ---------------------------------------------------------------------------

/// World with obstacles: one ccw outer boundary plus disjoint cw holes.
/// Free space is the closed set bounded by these rings.
class PolygonalEnvironment {
 public:
  PolygonalEnvironment() = default;
  PolygonalEnvironment(Ring outer, std::vector<Ring> holes = {})
      : outer_(std::move(outer)), holes_(std::move(holes)) {
    normalize();
    validate();
  }

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }

  BBox bbox() const { return ring_bbox(outer_); }

  double free_area() const {
    double a = std::abs(signed_ring_area(outer_));
    for (const Ring& h : holes_) a -= std::abs(signed_ring_area(h));
    return a;
  }

  bool contains(Point p, double tol = kCoordTol) const {
    if (!point_in_ring(outer_, p, tol)) return false;
    for (const Ring& h : holes_) {
      bool on_boundary = false;
      for (std::size_t i = 0, n = h.size(); i < n; ++i) {
        if (point_segment_distance(p, h[i], h[(i + 1) % n]) <= tol) {
          on_boundary = true;
          break;
        }
      }
      if (on_boundary) continue;
      if (winding_number(h, p) != 0) return false;
    }
    return true;
  }

  double boundary_distance(Point p) const {
    double d = std::numeric_limits<double>::infinity();
    auto scan = [&](const Ring& r) {
      for (std::size_t i = 0, n = r.size(); i < n; ++i) {
        d = std::min(d, point_segment_distance(p, r[i], r[(i + 1) % n]));
      }
    };
    scan(outer_);
    for (const Ring& h : holes_) scan(h);
    return d;
  }

  struct Segment {
    Point a, b;
  };

  const std::vector<Segment>& boundary_segments() const { return segments_; }

  /// Vertices whose interior (free-space) angle exceeds pi. Indexed as flat points.
  const std::vector<Point>& reflex_vertices() const { return reflex_; }

 private:
  void normalize() {
    if (outer_.size() < 3) throw std::invalid_argument("environment outer ring needs >= 3 vertices");
    if (signed_ring_area(outer_) < 0.0) std::reverse(outer_.begin(), outer_.end());
    for (Ring& h : holes_) {
      if (h.size() < 3) throw std::invalid_argument("environment hole ring needs >= 3 vertices");
      if (signed_ring_area(h) > 0.0) std::reverse(h.begin(), h.end());
    }
    auto collect = [&](const Ring& r) {
      for (std::size_t i = 0, n = r.size(); i < n; ++i) {
        segments_.push_back({r[i], r[(i + 1) % n]});
      }
    };
    collect(outer_);
    for (const Ring& h : holes_) collect(h);
    auto collect_reflex = [&](const Ring& r) {
      // interior is to the left of directed edges for ccw outer / cw holes
      for (std::size_t i = 0, n = r.size(); i < n; ++i) {
        Point prev = r[(i + n - 1) % n];
        Point v = r[i];
        Point next = r[(i + 1) % n];
        double c = cross(v - prev, next - v);
        double scale = std::max(1.0, norm(v - prev) * norm(next - v));
        if (c < -kCoordTol * scale) reflex_.push_back(v);
      }
    };
    collect_reflex(outer_);
    for (const Ring& h : holes_) collect_reflex(h);
  }

  void validate() const {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      for (std::size_t j = i + 1; j < segments_.size(); ++j) {
        const Segment& s1 = segments_[i];
        const Segment& s2 = segments_[j];
        if (near(s1.a, s2.a) || near(s1.a, s2.b) || near(s1.b, s2.a) || near(s1.b, s2.b)) continue;
        SegmentHit hit;
        if (segment_intersection(s1.a, s1.b, s2.a, s2.b, &hit)) {
          // endpoint touches between adjacent edges were excluded above
          if (hit.t > 1e-7 && hit.t < 1.0 - 1e-7 && hit.s > 1e-7 && hit.s < 1.0 - 1e-7) {
            throw std::invalid_argument("environment rings intersect");
          }
        }
      }
    }
    for (const Ring& h : holes_) {
      if (!point_in_ring(outer_, h.front(), kCoordTol)) {
        throw std::invalid_argument("environment hole outside outer ring");
      }
    }
  }

  Ring outer_;
  std::vector<Ring> holes_;
  std::vector<Segment> segments_;
  std::vector<Point> reflex_;
};

inline Region to_region(const PolygonalEnvironment& env) {
  Region r;
  r.parts.push_back({env.outer(), env.holes()});
  return r;
}

// ---------------------------------------------------------------------------
// Boolean set operations (backed by the vendored Vatti clipper)
// ---------------------------------------------------------------------------

enum class ClipOp { Intersect, Union, Difference };

namespace detail {

inline ClipperLib::IntPoint to_clipper(Point p) {
  return {static_cast<ClipperLib::cInt>(std::llround(p.x * kClipScale)),
          static_cast<ClipperLib::cInt>(std::llround(p.y * kClipScale))};
}

inline Point from_clipper(ClipperLib::IntPoint p) {
  return {static_cast<double>(p.X) / kClipScale, static_cast<double>(p.Y) / kClipScale};
}

inline void add_region(ClipperLib::Clipper& c, const Region& r, ClipperLib::PolyType type) {
  for (const PolygonWithHoles& part : r.parts) {
    ClipperLib::Path outer;
    outer.reserve(part.outer.size());
    for (Point p : part.outer) outer.push_back(to_clipper(p));
    if (!ClipperLib::Orientation(outer)) ClipperLib::ReversePath(outer);
    c.AddPath(outer, type, true);
    for (const Ring& h : part.holes) {
      ClipperLib::Path hole;
      hole.reserve(h.size());
      for (Point p : h) hole.push_back(to_clipper(p));
      if (ClipperLib::Orientation(hole)) ClipperLib::ReversePath(hole);
      c.AddPath(hole, type, true);
    }
  }
}

inline Ring from_clipper_path(const ClipperLib::Path& p) {
  Ring r;
  r.reserve(p.size());
  for (const ClipperLib::IntPoint& ip : p) r.push_back(from_clipper(ip));
  return r;
}

inline void collect_parts(const ClipperLib::PolyNode* node, Region& out, double min_area) {
  // node is an outer ring at this level; children are its holes, grandchildren
  // are nested outers
  if (std::abs(ClipperLib::Area(node->Contour)) / (kClipScale * kClipScale) >= min_area) {
    PolygonWithHoles part;
    part.outer = from_clipper_path(node->Contour);
    for (const ClipperLib::PolyNode* hole : node->Childs) {
      if (std::abs(ClipperLib::Area(hole->Contour)) / (kClipScale * kClipScale) >= min_area) {
        part.holes.push_back(from_clipper_path(hole->Contour));
      }
    }
    out.parts.push_back(std::move(part));
  }
  for (const ClipperLib::PolyNode* hole : node->Childs) {
    for (const ClipperLib::PolyNode* nested : hole->Childs) collect_parts(nested, out, min_area);
  }
}

}  // namespace detail

/// Boolean set operation on regions. Difference returns cl(a \ b). Output
/// components below the sliver cutoff (1e-9 of the joint bbox area) are
/// dropped.
inline Region clip(const Region& a, const Region& b, ClipOp op) {
  ClipperLib::Clipper c;
  detail::add_region(c, a, ClipperLib::ptSubject);
  detail::add_region(c, b, ClipperLib::ptClip);
  ClipperLib::ClipType ct = op == ClipOp::Intersect ? ClipperLib::ctIntersection
                            : op == ClipOp::Union   ? ClipperLib::ctUnion
                                                    : ClipperLib::ctDifference;
  ClipperLib::PolyTree tree;
  c.Execute(ct, tree, ClipperLib::pftNonZero, ClipperLib::pftNonZero);

  BBox bb = region_bbox(a);
  bb.expand(region_bbox(b));
  double min_area = kSliverRel * std::max(bb.area(), 1e-12);

  Region out;
  for (const ClipperLib::PolyNode* node : tree.Childs) detail::collect_parts(node, out, min_area);
  return out;
}

inline Region intersect(const Region& a, const Region& b) { return clip(a, b, ClipOp::Intersect); }
inline Region unite(const Region& a, const Region& b) { return clip(a, b, ClipOp::Union); }
inline Region difference(const Region& a, const Region& b) { return clip(a, b, ClipOp::Difference); }

// ---------------------------------------------------------------------------
// Region construction helpers
// ---------------------------------------------------------------------------

inline Region rect_region(double min_x, double min_y, double max_x, double max_y) {
  Region r;
  r.parts.push_back({{{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}}, {}});
  return r;
}

/// Regular n-gon inscribed in the circle (center, radius), first vertex at
/// angle 0.
inline Region regular_ngon(Point center, double radius, int n) {
  if (n < 3) throw std::invalid_argument("regular_ngon needs n >= 3");
  Ring ring;
  ring.reserve(n);
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * kPi * k / n;
    ring.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  Region r;
  r.parts.push_back({std::move(ring), {}});
  return r;
}

/// Half-plane {x : |x - u| <= |x - v|} clipped to a generous box around `extent`.
inline Region halfplane_region(Point u, Point v, const BBox& extent) {
  Point mid = (u + v) * 0.5;
  Point n = normalized(u - v);  // points into the half-plane
  if (norm(u - v) <= kCoordTol) throw std::invalid_argument("halfplane_region: coincident points");
  Point t{-n.y, n.x};
  double ext = 4.0 * std::max(extent.diagonal(), 1.0) +
               4.0 * std::max({dist(mid, {extent.min_x, extent.min_y}), 1.0});
  Ring ring{mid + t * ext, mid + t * ext + n * ext, mid - t * ext + n * ext, mid - t * ext};
  Region r;
  r.parts.push_back({std::move(ring), {}});
  return r;
}

/// Uniform sample inside a region by bbox rejection. Throws after
/// `max_attempts` misses (degenerate or near-empty regions).
inline Point sample_point_in_region(const Region& reg, std::mt19937_64& rng, int max_attempts = 100000) {
  BBox bb = region_bbox(reg);
  if (reg.empty() || bb.empty()) throw std::runtime_error("sample_point_in_region: empty region");
  std::uniform_real_distribution<double> ux(bb.min_x, bb.max_x);
  std::uniform_real_distribution<double> uy(bb.min_y, bb.max_y);
  for (int i = 0; i < max_attempts; ++i) {
    Point p{ux(rng), uy(rng)};
    if (point_in_region(reg, p, 0.0)) return p;
  }
  throw std::runtime_error("sample_point_in_region: rejection sampling budget exhausted");
}

// ---------------------------------------------------------------------------
// Polylines
// ---------------------------------------------------------------------------

/// Piecewise-linear path; consecutive vertices distinct.
struct Polyline {
  std::vector<Point> vertices;

  double length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) len += dist(vertices[i - 1], vertices[i]);
    return len;
  }

  /// Accumulated |heading change| at interior vertices.
  double interior_turn() const {
    double t = 0.0;
    for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
      Point d1 = vertices[i] - vertices[i - 1];
      Point d2 = vertices[i + 1] - vertices[i];
      t += turn_angle(std::atan2(d1.y, d1.x), std::atan2(d2.y, d2.x));
    }
    return t;
  }
};

/// True when the whole segment pq stays inside the closed free space.
/// Exact for polygonal environments: containment can only switch where the
/// segment meets a boundary edge, so testing one interior point per
/// crossing-free piece decides it.
inline bool segment_in_env(const PolygonalEnvironment& env, Point p, Point q) {
  if (!env.contains(p) || !env.contains(q)) return false;
  double len = dist(p, q);
  if (len <= kCoordTol) return true;
  std::vector<double> cuts{0.0, 1.0};
  std::vector<double> overlap;
  for (const auto& seg : env.boundary_segments()) {
    SegmentHit hit;
    overlap.clear();
    if (segment_intersection(p, q, seg.a, seg.b, &hit, &overlap)) {
      if (overlap.size() == 2) {
        cuts.push_back(overlap[0]);
        cuts.push_back(overlap[1]);
      } else {
        cuts.push_back(hit.t);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double min_piece = 2.0 * kCoordTol / len;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] - cuts[i - 1] <= min_piece) continue;
    double mid = 0.5 * (cuts[i] + cuts[i - 1]);
    if (!env.contains(p + (q - p) * mid)) return false;
  }
  return true;
}

}  // namespace milaps
