#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "milaps/geometry.hpp"
#include "milaps/model.hpp"
#include "milaps/shortest_paths.hpp"

namespace milaps {

/// Complete graph for the search problem with turning: per-vertex weights,
/// start costs, pairwise travel times and on-demand triple turning costs.
///
/// Turning costs are never materialized as a full 3D table; they derive in
/// O(1) from the stored per-pair segment directions, which is exact because
/// turning at u depends only on the incoming and outgoing directions there.
class GsptInstance {
 public:
  GsptInstance() = default;

  /// Assemble from explicit tables. `out_dir`/`in_dir` are eta x eta
  /// row-major direction tables (radians) of the u->v connection.
  GsptInstance(std::vector<double> weights, std::vector<double> start_costs,
               std::vector<double> travel, std::vector<double> out_dir, std::vector<double> in_dir,
               double turn_rate, int start = 0)
      : eta_(static_cast<int>(weights.size())),
        start_(start),
        turn_rate_(turn_rate),
        w_(std::move(weights)),
        start_costs_(std::move(start_costs)),
        d_(std::move(travel)),
        out_dir_(std::move(out_dir)),
        in_dir_(std::move(in_dir)) {
    std::size_t n = static_cast<std::size_t>(eta_);
    if (start_costs_.size() != n || d_.size() != n * n || out_dir_.size() != n * n ||
        in_dir_.size() != n * n) {
      throw std::invalid_argument("GsptInstance: inconsistent table sizes");
    }
    for (double w : w_) {
      if (!(w > 0.0)) throw std::invalid_argument("GsptInstance: weights must be positive");
    }
    detect_flags();
  }

  int size() const { return eta_; }
  int start() const { return start_; }
  bool symmetric() const { return symmetric_; }
  bool gsp() const { return gsp_; }
  bool tdp() const { return tdp_; }
  double turn_rate() const { return turn_rate_; }

  double weight(int v) const { return w_[v]; }
  const std::vector<double>& weights() const { return w_; }
  void set_weights(std::vector<double> w) {
    if (w.size() != w_.size()) throw std::invalid_argument("set_weights: size mismatch");
    w_ = std::move(w);
    detect_flags();
  }

  /// Travel time between vertices (seconds).
  double travel(int u, int v) const { return d_[idx(u, v)]; }

  /// Start cost: turning at the start vertex toward the first vertex.
  double start_cost(int v) const { return start_costs_[v]; }

  /// Turning cost at u when traveling h -> u -> v. Zero for degenerate legs.
  double turn_cost(int h, int u, int v) const {
    if (turn_rate_ == 0.0 || h == u || u == v) return 0.0;
    return turn_rate_ * turn_angle(in_dir_[idx(h, u)], out_dir_[idx(u, v)]);
  }

  double out_dir(int u, int v) const { return out_dir_[idx(u, v)]; }
  double in_dir(int u, int v) const { return in_dir_[idx(u, v)]; }

  /// Induced sub-instance over `vertices` (old indices), with a new start.
  GsptInstance induced(const std::vector<int>& vertices, int new_start_old_index) const {
    std::size_t m = vertices.size();
    std::vector<double> w(m), sc(m, 0.0), d(m * m, 0.0), od(m * m, 0.0), id(m * m, 0.0);
    int new_start = -1;
    for (std::size_t a = 0; a < m; ++a) {
      w[a] = w_[vertices[a]];
      if (vertices[a] == new_start_old_index) new_start = static_cast<int>(a);
      for (std::size_t b = 0; b < m; ++b) {
        d[a * m + b] = d_[idx(vertices[a], vertices[b])];
        od[a * m + b] = out_dir_[idx(vertices[a], vertices[b])];
        id[a * m + b] = in_dir_[idx(vertices[a], vertices[b])];
      }
    }
    if (new_start < 0) throw std::invalid_argument("induced: start not among vertices");
    return GsptInstance(std::move(w), std::move(sc), std::move(d), std::move(od), std::move(id),
                        turn_rate_, new_start);
  }

  void set_start_costs(std::vector<double> sc) {
    if (sc.size() != start_costs_.size()) throw std::invalid_argument("set_start_costs: size mismatch");
    start_costs_ = std::move(sc);
    detect_flags();
  }

 private:
  std::size_t idx(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(eta_) +
           static_cast<std::size_t>(v);
  }

  void detect_flags() {
    symmetric_ = true;
    for (int u = 0; u < eta_ && symmetric_; ++u) {
      for (int v = u + 1; v < eta_; ++v) {
        if (std::abs(d_[idx(u, v)] - d_[idx(v, u)]) > 1e-12) {
          symmetric_ = false;
          break;
        }
        if (turn_rate_ != 0.0) {
          // reversal consistency keeps the derived 3D costs symmetric
          if (std::abs(wrap_angle(out_dir_[idx(v, u)] - in_dir_[idx(u, v)] - kPi)) > 1e-9 ||
              std::abs(wrap_angle(in_dir_[idx(v, u)] - out_dir_[idx(u, v)] - kPi)) > 1e-9) {
            symmetric_ = false;
            break;
          }
        }
      }
    }
    bool theta_zero = turn_rate_ == 0.0 || eta_ <= 2;
    if (!theta_zero) {
      theta_zero = true;
      for (int u = 0; u < eta_ && theta_zero; ++u) {
        // all incoming and outgoing directions at u must agree
        std::optional<double> ref;
        for (int v = 0; v < eta_; ++v) {
          if (v == u) continue;
          for (double a : {out_dir_[idx(u, v)], in_dir_[idx(v, u)]}) {
            if (!ref) ref = a;
            if (std::abs(wrap_angle(a - *ref)) > 1e-12) {
              theta_zero = false;
              break;
            }
          }
          if (!theta_zero) break;
        }
      }
    }
    bool vartheta_zero = true;
    for (double c : start_costs_) {
      if (c != 0.0) {
        vartheta_zero = false;
        break;
      }
    }
    gsp_ = theta_zero && vartheta_zero;
    bool const_w = true;
    for (double w : w_) {
      if (std::abs(w - w_.front()) > 1e-12) {
        const_w = false;
        break;
      }
    }
    tdp_ = gsp_ && const_w;
  }

  int eta_ = 0;
  int start_ = 0;
  double turn_rate_ = 0.0;
  bool symmetric_ = true;
  bool gsp_ = true;
  bool tdp_ = true;
  std::vector<double> w_;
  std::vector<double> start_costs_;
  std::vector<double> d_;        // eta x eta travel seconds
  std::vector<double> out_dir_;  // eta x eta first-segment directions
  std::vector<double> in_dir_;   // eta x eta last-segment directions
};

/// Vertex ordering starting at the instance's start vertex.
struct Permutation {
  std::vector<int> order;

  int size() const { return static_cast<int>(order.size()); }
  int operator[](int i) const { return order[i]; }
};

inline Permutation identity_permutation(const GsptInstance& inst) {
  Permutation p;
  p.order.resize(inst.size());
  std::iota(p.order.begin(), p.order.end(), 0);
  if (inst.start() != 0) std::swap(p.order[0], p.order[inst.start()]);
  return p;
}

inline void check_permutation(const GsptInstance& inst, const Permutation& p) {
  if (p.size() != inst.size()) throw std::invalid_argument("permutation size mismatch");
  if (p.order.empty() || p.order[0] != inst.start()) {
    throw std::invalid_argument("permutation must start at the start vertex");
  }
  std::vector<bool> seen(p.size(), false);
  for (int v : p.order) {
    if (v < 0 || v >= inst.size() || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
}

/// Latency-weighted objective: sum over positions of latency times vertex
/// weight. Single forward pass.
inline double objective(const GsptInstance& inst, const Permutation& p) {
  double delta = 0.0;
  double obj = 0.0;
  for (int i = 1; i < p.size(); ++i) {
    double turn = i == 1 ? inst.start_cost(p[1]) : inst.turn_cost(p[i - 2], p[i - 1], p[i]);
    delta += turn + inst.travel(p[i - 1], p[i]);
    obj += delta * inst.weight(p[i]);
  }
  return obj;
}

/// Latency of every position in the permutation (index 0 has latency 0).
inline std::vector<double> latencies(const GsptInstance& inst, const Permutation& p) {
  std::vector<double> lat(p.size(), 0.0);
  double delta = 0.0;
  for (int i = 1; i < p.size(); ++i) {
    double turn = i == 1 ? inst.start_cost(p[1]) : inst.turn_cost(p[i - 2], p[i - 1], p[i]);
    delta += turn + inst.travel(p[i - 1], p[i]);
    lat[i] = delta;
  }
  return lat;
}

/// A permutation realized as a polyline through the guard path matrix.
/// Junction vertices shared by consecutive legs are stored once; `junction`
/// maps each permutation position to its polyline vertex index.
struct Route {
  Permutation perm;
  Polyline polyline;
  std::vector<std::size_t> junction;

  /// Arc-length parameter of each permutation position's first visit.
  std::vector<double> junction_params() const {
    std::vector<double> params(junction.size(), 0.0);
    double total = polyline.length();
    if (total <= 0.0) return params;
    std::vector<double> cum(polyline.vertices.size(), 0.0);
    for (std::size_t k = 1; k < polyline.vertices.size(); ++k) {
      cum[k] = cum[k - 1] + dist(polyline.vertices[k - 1], polyline.vertices[k]);
    }
    for (std::size_t i = 0; i < junction.size(); ++i) params[i] = cum[junction[i]] / total;
    return params;
  }
};

/// Concatenates the quickest paths between consecutive permutation vertices.
inline Route assemble_route(const PathMatrix& matrix, const Permutation& perm) {
  Route r;
  r.perm = perm;
  if (perm.size() == 0) return r;
  const PathEntry& first = matrix[perm[0]][perm[0]];
  r.polyline.vertices.push_back(first.polyline.vertices.front());
  r.junction.push_back(0);
  for (int i = 1; i < perm.size(); ++i) {
    const PathEntry& leg = matrix[perm[i - 1]][perm[i]];
    const auto& v = leg.polyline.vertices;
    for (std::size_t k = 1; k < v.size(); ++k) r.polyline.vertices.push_back(v[k]);
    r.junction.push_back(r.polyline.vertices.size() - 1);
  }
  return r;
}

/// Build the instance from a guard path matrix and the travel time model.
/// Start heading, when given, defines the start costs.
inline GsptInstance build_instance(const PathMatrix& matrix, const TravelTimeModel& tm,
                                   std::optional<double> start_heading = std::nullopt,
                                   int start = 0) {
  std::size_t n = matrix.size();
  if (n == 0) throw std::invalid_argument("build_instance: empty matrix");
  std::vector<double> w(n, 1.0), sc(n, 0.0), d(n * n, 0.0), od(n * n, 0.0), id(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    if (matrix[u].size() != n) throw std::invalid_argument("build_instance: ragged matrix");
    for (std::size_t v = 0; v < n; ++v) {
      const PathEntry& e = matrix[u][v];
      d[u * n + v] = tm.t_lin * e.length + tm.t_ang * e.interior_turn;
      od[u * n + v] = e.out_dir;
      id[u * n + v] = e.in_dir;
    }
  }
  if (start_heading) {
    for (std::size_t v = 0; v < n; ++v) {
      if (static_cast<int>(v) == start || matrix[start][v].degenerate) continue;
      sc[v] = tm.t_ang * turn_angle(*start_heading, matrix[start][v].out_dir);
    }
  }
  return GsptInstance(std::move(w), std::move(sc), std::move(d), std::move(od), std::move(id),
                      tm.t_ang, start);
}

}  // namespace milaps
