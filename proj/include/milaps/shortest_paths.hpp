#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "milaps/geometry.hpp"

namespace milaps {

/// Quickest-path entry between two guards: the Euclidean shortest polyline
/// through free space, turning only at reflex vertices.
struct PathEntry {
  Polyline polyline;
  double length = 0.0;
  double interior_turn = 0.0;  // accumulated |turn| at interior vertices
  double out_dir = 0.0;        // direction of the first segment
  double in_dir = 0.0;         // direction of the last segment
  bool degenerate = true;      // single-point path (u == u)

  PathEntry reversed() const {
    PathEntry r;
    r.polyline.vertices.assign(polyline.vertices.rbegin(), polyline.vertices.rend());
    r.length = length;
    r.interior_turn = interior_turn;
    r.degenerate = degenerate;
    r.out_dir = wrap_angle(in_dir + kPi);
    r.in_dir = wrap_angle(out_dir + kPi);
    return r;
  }
};

inline PathEntry make_path_entry(std::vector<Point> vertices) {
  PathEntry e;
  e.polyline.vertices = std::move(vertices);
  if (e.polyline.vertices.size() < 2) {
    e.degenerate = true;
    return e;
  }
  e.degenerate = false;
  e.length = e.polyline.length();
  e.interior_turn = e.polyline.interior_turn();
  const auto& v = e.polyline.vertices;
  Point d0 = v[1] - v[0];
  Point d1 = v[v.size() - 1] - v[v.size() - 2];
  e.out_dir = std::atan2(d0.y, d0.x);
  e.in_dir = std::atan2(d1.y, d1.x);
  return e;
}

using PathMatrix = std::vector<std::vector<PathEntry>>;

/// All-pairs shortest paths among guards through the free space, computed on
/// the visibility graph over guards and reflex vertices. The matrix is
/// length-symmetric by construction: entry (v,u) is the exact reversal of
/// entry (u,v).
inline PathMatrix shortest_path_matrix(const PolygonalEnvironment& env,
                                       const std::vector<Point>& guards) {
  const std::size_t n_guards = guards.size();
  for (std::size_t i = 0; i < n_guards; ++i) {
    if (!env.contains(guards[i])) {
      throw std::invalid_argument("guard " + std::to_string(i) + " not in free space");
    }
  }

  // graph nodes: guards first, then reflex vertices not coinciding with a guard
  std::vector<Point> nodes = guards;
  for (const Point& rv : env.reflex_vertices()) {
    bool dup = false;
    for (const Point& g : guards) {
      if (near(g, rv)) {
        dup = true;
        break;
      }
    }
    if (!dup) nodes.push_back(rv);
  }
  const std::size_t n = nodes.size();

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (segment_in_env(env, nodes[i], nodes[j])) {
        double w = dist(nodes[i], nodes[j]);
        adj[i].push_back({static_cast<int>(j), w});
        adj[j].push_back({static_cast<int>(i), w});
      }
    }
  }

  PathMatrix matrix(n_guards, std::vector<PathEntry>(n_guards));
  std::vector<double> dist_to(n);
  std::vector<int> parent(n);
  using QE = std::pair<double, int>;
  for (std::size_t src = 0; src < n_guards; ++src) {
    std::fill(dist_to.begin(), dist_to.end(), std::numeric_limits<double>::infinity());
    std::fill(parent.begin(), parent.end(), -1);
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    dist_to[src] = 0.0;
    pq.push({0.0, static_cast<int>(src)});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist_to[u] + 1e-15) continue;
      for (auto [v, w] : adj[u]) {
        if (dist_to[u] + w < dist_to[v] - 1e-15) {
          dist_to[v] = dist_to[u] + w;
          parent[v] = u;
          pq.push({dist_to[v], v});
        }
      }
    }
    for (std::size_t dst = src; dst < n_guards; ++dst) {
      if (dst == src) {
        matrix[src][src] = make_path_entry({guards[src]});
        continue;
      }
      if (!std::isfinite(dist_to[dst])) {
        throw std::runtime_error("guards " + std::to_string(src) + " and " + std::to_string(dst) +
                                 " are not connected in free space");
      }
      std::vector<Point> rev;
      for (int v = static_cast<int>(dst); v != -1; v = parent[v]) rev.push_back(nodes[v]);
      std::vector<Point> fwd(rev.rbegin(), rev.rend());
      matrix[src][dst] = make_path_entry(std::move(fwd));
      matrix[dst][src] = matrix[src][dst].reversed();
    }
  }
  return matrix;
}

}  // namespace milaps
