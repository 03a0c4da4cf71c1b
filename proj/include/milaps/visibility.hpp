#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "milaps/geometry.hpp"

namespace milaps {

/// Max arc spacing for chord approximation of range-limited visibility
/// boundaries. Yields between 16 and 64 samples for a full circle.
inline double circ_sample_distance(double r_vis) {
  return std::max(kPi / 32.0 * r_vis, std::min(kPi / 8.0 * r_vis, kPi / 2.0));
}

inline constexpr double kUnboundedRange = std::numeric_limits<double>::infinity();

namespace detail {

// One-sided limits of the nearest-boundary distance along the ray from q in
// direction u, as the ray angle approaches the event angle from below (cw)
// and above (ccw). Segments grazing along the ray contribute to neither side.
struct RayLimits {
  double below = std::numeric_limits<double>::infinity();
  double above = std::numeric_limits<double>::infinity();
};

inline RayLimits ray_limits(Point q, Point u,
                            const std::vector<PolygonalEnvironment::Segment>& segments,
                            double tol) {
  RayLimits lim;
  for (const auto& seg : segments) {
    Point pa = seg.a - q;
    Point pb = seg.b - q;
    double ca = cross(u, pa);
    double cb = cross(u, pb);
    double da = dot(u, pa);
    double db = dot(u, pb);
    bool a_on = std::abs(ca) <= tol * std::max(1.0, norm(pa));
    bool b_on = std::abs(cb) <= tol * std::max(1.0, norm(pb));
    if (a_on && b_on) continue;  // collinear with the ray: grazes, blocks nothing
    if (a_on) {
      if (da > tol) {
        if (cb < 0.0) lim.below = std::min(lim.below, da);
        else lim.above = std::min(lim.above, da);
      }
      continue;
    }
    if (b_on) {
      if (db > tol) {
        if (ca < 0.0) lim.below = std::min(lim.below, db);
        else lim.above = std::min(lim.above, db);
      }
      continue;
    }
    if ((ca > 0.0) == (cb > 0.0)) continue;  // both endpoints on one side
    Point w = seg.b - seg.a;
    double denom = cross(u, w);
    double t = cross(pa, w) / denom;
    if (t > tol) {
      lim.below = std::min(lim.below, t);
      lim.above = std::min(lim.above, t);
    }
  }
  return lim;
}

// Direction pointing into the free space for a query on the boundary.
inline Point inward_direction(const PolygonalEnvironment& env, Point q) {
  auto try_vertex = [&](const Ring& r) -> Point {
    for (std::size_t i = 0, n = r.size(); i < n; ++i) {
      if (!near(r[i], q, 1e-7)) continue;
      Point a = normalized(r[(i + n - 1) % n] - r[i]);
      Point b = normalized(r[(i + 1) % n] - r[i]);
      // interior lies left of the directed boundary; bisect the ccw wedge
      // from the outgoing edge b around to the incoming reversal a
      double ang_b = std::atan2(b.y, b.x);
      double span = std::atan2(a.y, a.x) - ang_b;
      while (span <= 0.0) span += 2.0 * kPi;
      double mid = ang_b + 0.5 * span;
      return {std::cos(mid), std::sin(mid)};
    }
    return {0.0, 0.0};
  };
  Point d = try_vertex(env.outer());
  if (d == Point{0.0, 0.0}) {
    for (const Ring& h : env.holes()) {
      d = try_vertex(h);
      if (!(d == Point{0.0, 0.0})) break;
    }
  }
  if (d == Point{0.0, 0.0}) {
    // on an edge interior: interior is left of the nearest directed edge
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : env.boundary_segments()) {
      double dd = point_segment_distance(q, seg.a, seg.b);
      if (dd < best) {
        best = dd;
        Point e = normalized(seg.b - seg.a);
        d = {-e.y, e.x};
      }
    }
  }
  return d;
}

}  // namespace detail

/// Visibility polygon from q with unlimited range: the star-shaped set of
/// points with direct line of sight from q. Query points on the boundary are
/// nudged into the interior by ~1e-7 m.
inline Ring visibility_polygon(const PolygonalEnvironment& env, Point q) {
  if (!env.contains(q)) throw std::invalid_argument("query point not in free space");
  if (env.boundary_distance(q) <= 10.0 * kCoordTol) {
    Point d = detail::inward_direction(env, q);
    q = q + d * 1e-7;
  }

  const auto& segments = env.boundary_segments();
  std::vector<double> angles;
  angles.reserve(2 * segments.size());
  for (const auto& seg : segments) {
    angles.push_back(std::atan2(seg.a.y - q.y, seg.a.x - q.x));
    angles.push_back(std::atan2(seg.b.y - q.y, seg.b.x - q.x));
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               angles.end());

  const double tol = kCoordTol;
  Ring poly;
  poly.reserve(2 * angles.size());
  for (double ang : angles) {
    Point u{std::cos(ang), std::sin(ang)};
    detail::RayLimits lim = detail::ray_limits(q, u, segments, tol);
    if (!std::isfinite(lim.below) || !std::isfinite(lim.above)) {
      // can only happen for queries outside the closed free space
      continue;
    }
    if (std::abs(lim.below - lim.above) <= 2.0 * tol) {
      poly.push_back(q + u * lim.below);
    } else {
      // window: boundary runs along the ray between the two depths
      poly.push_back(q + u * lim.below);
      poly.push_back(q + u * lim.above);
    }
  }
  // drop consecutive duplicates
  Ring cleaned;
  for (const Point& p : poly) {
    if (cleaned.empty() || !near(cleaned.back(), p, 1e-9)) cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && near(cleaned.front(), cleaned.back(), 1e-9)) cleaned.pop_back();
  return cleaned;
}

/// Range-limited visibility region. Circular arcs on the boundary are
/// approximated by chords of an inscribed regular polygon whose arc spacing
/// never exceeds circ_sample_distance(r_vis).
inline Region visibility_region(const PolygonalEnvironment& env, Point q, double r_vis) {
  if (!(r_vis > 0.0)) throw std::invalid_argument("visibility radius must be positive");
  Ring star = visibility_polygon(env, q);
  Region vis;
  if (star.size() >= 3) vis.parts.push_back({std::move(star), {}});
  if (!std::isfinite(r_vis)) return vis;
  int n = static_cast<int>(std::floor(2.0 * kPi * r_vis / circ_sample_distance(r_vis)));
  n = std::clamp(n, 16, 64);
  return intersect(vis, regular_ngon(q, r_vis, n));
}

/// Read-mostly visibility region cache keyed by configuration coordinates.
class VisibilityCache {
 public:
  Region get(const PolygonalEnvironment& env, Point q, double r_vis) {
    Key key{std::llround(q.x / kCoordTol), std::llround(q.y / kCoordTol)};
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Region r = visibility_region(env, q, r_vis);
    std::unique_lock lock(mutex_);
    return cache_.emplace(key, std::move(r)).first->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  struct Key {
    long long x, y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<long long>()(k.x) ^ (std::hash<long long>()(k.y) * 1000003ULL);
    }
  };
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Region, KeyHash> cache_;
};

}  // namespace milaps
