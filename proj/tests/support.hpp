#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here recomputes results from first principles so the library code is never
// checked against itself.

#include <algorithm>
#include <random>
#include <vector>

#include "milaps/geometry.hpp"
#include "milaps/gspt.hpp"
#include "milaps/model.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// GSPT oracles
// ---------------------------------------------------------------------------

/// Naive latency-weighted objective, recomputing every latency from scratch.
inline double oracle_objective(const milaps::GsptInstance& inst, const milaps::Permutation& p) {
  double total = 0.0;
  for (int i = 1; i < p.size(); ++i) {
    double delta = 0.0;
    for (int j = 1; j <= i; ++j) {
      double turn = j == 1 ? inst.start_cost(p[1]) : inst.turn_cost(p[j - 2], p[j - 1], p[j]);
      delta += turn + inst.travel(p[j - 1], p[j]);
    }
    total += delta * inst.weight(p[i]);
  }
  return total;
}

/// Plain latency sum of a tour, for the delivery-problem reduction check.
inline double oracle_tdp_latency_sum(const milaps::GsptInstance& inst,
                                     const milaps::Permutation& p) {
  double total = 0.0;
  double delta = 0.0;
  for (int i = 1; i < p.size(); ++i) {
    delta += inst.travel(p[i - 1], p[i]);
    total += delta;
  }
  return total;
}

/// Exhaustive optimum over all permutations fixing the start vertex.
inline double exhaustive_optimum(const milaps::GsptInstance& inst,
                                 milaps::Permutation* arg_best = nullptr) {
  std::vector<int> rest;
  for (int v = 0; v < inst.size(); ++v) {
    if (v != inst.start()) rest.push_back(v);
  }
  std::sort(rest.begin(), rest.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    milaps::Permutation p;
    p.order.push_back(inst.start());
    p.order.insert(p.order.end(), rest.begin(), rest.end());
    double obj = oracle_objective(inst, p);
    if (obj < best) {
      best = obj;
      if (arg_best) *arg_best = p;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

// ---------------------------------------------------------------------------
// Random GSPT instances
// ---------------------------------------------------------------------------

struct InstanceOptions {
  bool with_turns = true;
  bool with_start_costs = true;
  bool asymmetric = false;
  bool constant_weights = false;
};

/// Random instance with symmetric travel costs and direction-derived turning
/// costs (reversal-consistent directions keep the 3D costs symmetric).
inline milaps::GsptInstance random_instance(std::mt19937_64& rng, int eta,
                                            const InstanceOptions& opt = {}) {
  std::uniform_real_distribution<double> uw(0.1, 10.0);
  std::uniform_real_distribution<double> ud(1.0, 10.0);
  std::uniform_real_distribution<double> ua(-milaps::kPi, milaps::kPi);
  std::uniform_real_distribution<double> uc(0.0, 2.0);
  std::size_t n = static_cast<std::size_t>(eta);
  std::vector<double> w(n), sc(n, 0.0), d(n * n, 0.0), od(n * n, 0.0), id(n * n, 0.0);
  for (auto& x : w) x = opt.constant_weights ? 1.0 : uw(rng);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      double len = ud(rng);
      d[u * n + v] = len;
      d[v * n + u] = opt.asymmetric ? ud(rng) : len;
      double out_uv = ua(rng);
      double in_uv = ua(rng);
      od[u * n + v] = out_uv;
      id[u * n + v] = in_uv;
      if (opt.asymmetric) {
        od[v * n + u] = ua(rng);
        id[v * n + u] = ua(rng);
      } else {
        od[v * n + u] = milaps::wrap_angle(in_uv + milaps::kPi);
        id[v * n + u] = milaps::wrap_angle(out_uv + milaps::kPi);
      }
    }
  }
  double turn_rate = opt.with_turns ? 0.25 + uc(rng) : 0.0;
  if (opt.with_start_costs && opt.with_turns) {
    double heading = ua(rng);
    for (std::size_t v = 1; v < n; ++v) {
      sc[v] = turn_rate * milaps::turn_angle(heading, od[0 * n + v]);
    }
  }
  return milaps::GsptInstance(std::move(w), std::move(sc), std::move(d), std::move(od),
                              std::move(id), turn_rate, 0);
}

inline milaps::Permutation random_permutation(const milaps::GsptInstance& inst,
                                              std::mt19937_64& rng) {
  std::vector<int> rest;
  for (int v = 0; v < inst.size(); ++v) {
    if (v != inst.start()) rest.push_back(v);
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  milaps::Permutation p;
  p.order.push_back(inst.start());
  p.order.insert(p.order.end(), rest.begin(), rest.end());
  return p;
}

// ---------------------------------------------------------------------------
// Fixture environments
// ---------------------------------------------------------------------------

inline milaps::PolygonalEnvironment unit_square() {
  return milaps::PolygonalEnvironment({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

inline milaps::PolygonalEnvironment square_with_hole() {
  // unit square minus centered 0.5 x 0.5 hole
  return milaps::PolygonalEnvironment({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                      {{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}});
}

/// 20x20 box with one centered convex obstacle.
inline milaps::PolygonalEnvironment box_with_block() {
  return milaps::PolygonalEnvironment({{0, 0}, {20, 0}, {20, 20}, {0, 20}},
                                      {{{8, 8}, {12, 8}, {12, 12}, {8, 12}}});
}

/// U-shaped corridor: the start in one arm cannot see the other arm.
inline milaps::PolygonalEnvironment u_corridor() {
  return milaps::PolygonalEnvironment({{0, 0},
                                       {14, 0},
                                       {14, 10},
                                       {10, 10},
                                       {10, 4},
                                       {4, 4},
                                       {4, 10},
                                       {0, 10}});
}

/// Comb-shaped corridor: a spine with alternating teeth; room order matters
/// and turning is expensive relative to the short connecting moves.
inline milaps::PolygonalEnvironment comb_corridor(int teeth = 4) {
  // spine y in [0,2], teeth of width 2 and height 6 going up at x = 3, 9, 15, ...
  double x_end = 6.0 * teeth + 3.0;
  milaps::Ring outer;
  outer.push_back({0, 0});
  outer.push_back({x_end, 0});
  outer.push_back({x_end, 2});
  for (int t = teeth - 1; t >= 0; --t) {
    double x0 = 3.0 + 6.0 * t;
    outer.push_back({x0 + 2.0, 2.0});
    outer.push_back({x0 + 2.0, 8.0});
    outer.push_back({x0, 8.0});
    outer.push_back({x0, 2.0});
  }
  outer.push_back({0, 2});
  return milaps::PolygonalEnvironment(outer);
}

/// Random 20x20 map with disjoint convex obstacles, margins keep the free
/// space connected.
inline milaps::PolygonalEnvironment random_map(std::mt19937_64& rng, int n_obstacles = 5,
                                               double size = 20.0) {
  std::uniform_real_distribution<double> uc(3.5, size - 3.5);
  std::uniform_real_distribution<double> ur(0.8, 2.0);
  std::uniform_int_distribution<int> uk(3, 7);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * milaps::kPi);
  std::vector<milaps::Point> centers;
  std::vector<double> radii;
  std::vector<milaps::Ring> holes;
  int attempts = 0;
  while (static_cast<int>(holes.size()) < n_obstacles && attempts < 1000) {
    ++attempts;
    milaps::Point c{uc(rng), uc(rng)};
    double r = ur(rng);
    bool ok = true;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (milaps::dist(c, centers[i]) < r + radii[i] + 1.5) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    int k = uk(rng);
    double phase = uphase(rng);
    milaps::Ring ring;
    for (int v = 0; v < k; ++v) {
      double a = phase + 2.0 * milaps::kPi * v / k;
      ring.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    centers.push_back(c);
    radii.push_back(r);
    holes.push_back(std::move(ring));
  }
  return milaps::PolygonalEnvironment({{0, 0}, {size, 0}, {size, size}, {0, size}}, holes);
}

inline milaps::TargetDistribution uniform_targets(const milaps::PolygonalEnvironment& env) {
  milaps::TargetDistribution t;
  t.regions.push_back({1.0, milaps::to_region(env)});
  return t;
}

inline milaps::EtsProblem make_problem(milaps::PolygonalEnvironment env, milaps::Point start,
                                       double r_vis = milaps::kUnboundedRange,
                                       double t_lin = 1.0, double t_ang = 0.0,
                                       double epsilon = 1e-5) {
  milaps::EtsProblem p;
  p.env = std::move(env);
  p.r_vis = r_vis;
  p.time_model = {t_lin, t_ang};
  p.targets = uniform_targets(p.env);
  p.start = start;
  p.epsilon = epsilon;
  return p;
}

}  // namespace testsupport
