#pragma once

#include <chrono>
#include <vector>

#include "milaps/gspt.hpp"
#include "milaps/placement.hpp"

namespace milaps {

struct BaselineResult {
  Permutation perm;
  Route route;
  double elapsed = 0.0;
  bool timeout = false;  // set when wall time exceeded twice the budget
};

namespace detail {

inline double step_cost(const GsptInstance& inst, const std::vector<int>& order, int i, int v) {
  int prev = order[i - 1];
  double turn = i == 1 ? inst.start_cost(v) : inst.turn_cost(order[i - 2], prev, v);
  double denom = turn + inst.travel(prev, v);
  return denom <= 0.0 ? 1e-12 : denom;
}

}  // namespace detail

/// Single-step utility greedy: repeatedly appends the guard maximizing newly
/// visible target mass over the travel-plus-turning cost of reaching it.
inline BaselineResult ugreedy1(const EtsProblem& problem, const GuardSet& gs,
                               const PathMatrix& matrix, const GsptInstance& inst,
                               double t_max = std::numeric_limits<double>::infinity()) {
  auto t0 = std::chrono::steady_clock::now();
  const int n = gs.size();
  std::vector<int> order{0};
  std::vector<int> remaining;
  for (int v = 1; v < n; ++v) remaining.push_back(v);

  Region seen = gs.vis_regions[0];
  std::vector<double> masses(n, 0.0);
  for (int v : remaining) {
    masses[v] = region_mass(problem.targets, difference(gs.vis_regions[v], seen));
  }
  double mass_floor = 1e-12 * problem.targets.total_mass();

  BaselineResult res;
  for (int i = 1; i < n; ++i) {
    int best_pos = 0;
    double best_util = -1.0;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      int v = remaining[k];
      double util = std::max(masses[v], mass_floor) / detail::step_cost(inst, order, i, v);
      if (util > best_util) {
        best_util = util;
        best_pos = static_cast<int>(k);
      }
    }
    int chosen = remaining[best_pos];
    order.push_back(chosen);
    remaining.erase(remaining.begin() + best_pos);
    seen = unite(seen, gs.vis_regions[chosen]);
    for (int v : remaining) {
      masses[v] = region_mass(problem.targets, difference(gs.vis_regions[v], seen));
    }
  }
  res.perm.order = order;
  res.route = assemble_route(matrix, res.perm);
  res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.timeout = res.elapsed > 2.0 * t_max;
  return res;
}

struct UGreedyAParams {
  int node_budget = 16;  // N: max nodes expanded per committed step
  int beam = 4;          // B: children kept per node
};

/// Adaptive-lookahead utility greedy: a beam-restricted tree of the top-B
/// single-step candidates, depth chosen so the tree stays within the node
/// budget; commits the first move of the leaf with the best partial
/// expected-time objective.
inline BaselineResult ugreedyA(const EtsProblem& problem, const GuardSet& gs,
                               const PathMatrix& matrix, const GsptInstance& inst,
                               const UGreedyAParams& params = {},
                               double t_max = std::numeric_limits<double>::infinity()) {
  auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const int n = gs.size();
  const double total_mass = problem.targets.total_mass();
  const double mass_floor = 1e-12 * total_mass;

  int beam = std::max(1, std::min(params.beam, params.node_budget));
  int depth = 1;
  if (beam > 1) {
    while (static_cast<double>(std::pow(beam, depth + 1)) <= params.node_budget) ++depth;
  }

  std::vector<int> order{0};
  std::vector<bool> used(n, false);
  used[0] = true;
  Region seen = gs.vis_regions[0];

  BaselineResult res;
  struct Node {
    std::vector<int> path;  // vertices appended beyond the committed order
    Region seen;
    double latency;
    double score;  // partial expected-time sum
  };

  for (int i = 1; i < n; ++i) {
    if (!res.timeout && wall() > 2.0 * t_max) res.timeout = true;
    int chosen = -1;
    if (res.timeout || n - i == 1) {
      // single-step fallback: cheapest ratio move
      double best_util = -1.0;
      for (int v = 0; v < n; ++v) {
        if (used[v]) continue;
        double mass = region_mass(problem.targets, difference(gs.vis_regions[v], seen));
        double util = std::max(mass, mass_floor) / detail::step_cost(inst, order, i, v);
        if (util > best_util) {
          best_util = util;
          chosen = v;
        }
      }
    } else {
      double base_latency = 0.0;
      for (int k = 1; k < static_cast<int>(order.size()); ++k) {
        base_latency += detail::step_cost(inst, order, k, order[k]);
      }
      std::vector<Node> frontier{{{}, seen, base_latency, 0.0}};
      Node best_leaf;
      bool have_leaf = false;
      for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<Node> next;
        for (const Node& node : frontier) {
          // rank unused vertices by single-step utility within this branch
          std::vector<int> ext = order;
          ext.insert(ext.end(), node.path.begin(), node.path.end());
          int pos = static_cast<int>(ext.size());
          struct Cand {
            double util;
            double mass;
            double cost;
            int v;
          };
          std::vector<Cand> cands;
          for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            bool on_path = false;
            for (int pv : node.path) {
              if (pv == v) on_path = true;
            }
            if (on_path) continue;
            ext.push_back(v);
            double cost = detail::step_cost(inst, ext, pos, v);
            ext.pop_back();
            double mass = region_mass(problem.targets, difference(gs.vis_regions[v], node.seen));
            cands.push_back({std::max(mass, mass_floor) / cost, mass, cost, v});
          }
          std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            return a.util > b.util || (a.util == b.util && a.v < b.v);
          });
          if (static_cast<int>(cands.size()) > beam) cands.resize(beam);
          for (const Cand& c : cands) {
            Node child;
            child.path = node.path;
            child.path.push_back(c.v);
            child.latency = node.latency + c.cost;
            child.score = node.score + child.latency * (c.mass / total_mass);
            child.seen = unite(node.seen, gs.vis_regions[c.v]);
            if (d + 1 == depth || static_cast<int>(child.path.size()) == n - i) {
              if (!have_leaf || child.score < best_leaf.score) {
                best_leaf = child;
                have_leaf = true;
              }
            }
            next.push_back(std::move(child));
          }
        }
        frontier = std::move(next);
      }
      if (have_leaf) chosen = best_leaf.path.front();
    }
    if (chosen < 0) {
      for (int v = 0; v < n; ++v) {
        if (!used[v]) {
          chosen = v;
          break;
        }
      }
    }
    order.push_back(chosen);
    used[chosen] = true;
    seen = unite(seen, gs.vis_regions[chosen]);
  }
  res.perm.order = order;
  res.route = assemble_route(matrix, res.perm);
  res.elapsed = wall();
  if (res.elapsed > 2.0 * t_max) res.timeout = true;
  return res;
}

}  // namespace milaps
