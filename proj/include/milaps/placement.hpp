#pragma once

#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "milaps/model.hpp"

namespace milaps {

/// Guard set with cached visibility regions. Index 0 is the start
/// configuration.
struct GuardSet {
  std::vector<Point> guards;
  std::vector<Region> vis_regions;

  int size() const { return static_cast<int>(guards.size()); }

  Region seen_union() const {
    Region u;
    for (const Region& r : vis_regions) u = unite(u, r);
    return u;
  }
};

enum class PlacementMethod { ReflexGreedy, IRS };

struct PlacementParams {
  int irs_max_guards = 4096;
  int irs_sample_attempts = 100000;
  int min_interior_candidates = 64;
  int interior_candidates_per_reflex = 4;
};

namespace detail {

inline std::string coverage_error(double covered, double target, double total) {
  return "coverage target unreachable: achieved " + std::to_string(covered / total) +
         " of mass, required " + std::to_string(target / total);
}

inline GuardSet place_reflex_greedy(const EtsProblem& problem, std::mt19937_64& rng,
                                    const PlacementParams& params) {
  const double total = problem.targets.total_mass();
  const double target = (1.0 - problem.epsilon) * total;
  Region env_region = to_region(problem.env);

  std::vector<Point> candidates{problem.start};
  for (const Point& rv : problem.env.reflex_vertices()) candidates.push_back(rv);
  int n_interior = std::max(params.min_interior_candidates,
                            params.interior_candidates_per_reflex *
                                static_cast<int>(problem.env.reflex_vertices().size()));
  for (int k = 0; k < n_interior; ++k) {
    candidates.push_back(sample_point_in_region(env_region, rng));
  }

  GuardSet gs;
  gs.guards.push_back(problem.start);
  gs.vis_regions.push_back(problem.vis(problem.start));
  Region seen = gs.vis_regions[0];
  double covered = region_mass(problem.targets, seen);
  if (covered >= target - 1e-9 * total) return gs;

  std::vector<Region> cand_vis(candidates.size());
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    cand_vis[c] = problem.vis(candidates[c]);
  }

  // lazy greedy: gains only shrink as coverage grows, so a stale upper bound
  // that still tops the queue after refresh is the true argmax
  struct Entry {
    double gain;
    int index;
    int version;
  };
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.gain < b.gain || (a.gain == b.gain && a.index > b.index);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
  std::vector<int> version(candidates.size(), 0);
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    double gain = region_mass(problem.targets, cand_vis[c]);
    queue.push({gain, static_cast<int>(c), 0});
  }
  int round = 0;
  while (covered < target - 1e-9 * total) {
    Entry best{0.0, -1, 0};
    while (!queue.empty()) {
      Entry e = queue.top();
      queue.pop();
      if (e.version != version[e.index]) continue;
      if (e.version == round) {
        best = e;
        break;
      }
      double gain = region_mass(problem.targets, difference(cand_vis[e.index], seen));
      version[e.index] = round;
      if (gain > 1e-12 * total) queue.push({gain, e.index, round});
    }
    if (best.index < 0 || best.gain <= 1e-12 * total) {
      throw std::runtime_error(coverage_error(covered, target, total));
    }
    gs.guards.push_back(candidates[best.index]);
    gs.vis_regions.push_back(cand_vis[best.index]);
    seen = unite(seen, cand_vis[best.index]);
    covered = region_mass(problem.targets, seen);
    version[best.index] = -1;  // consumed
    ++round;
  }
  return gs;
}

inline GuardSet place_irs(const EtsProblem& problem, std::mt19937_64& rng,
                          const PlacementParams& params) {
  const double total = problem.targets.total_mass();
  const double target = (1.0 - problem.epsilon) * total;

  GuardSet gs;
  gs.guards.push_back(problem.start);
  gs.vis_regions.push_back(problem.vis(problem.start));
  Region seen = gs.vis_regions[0];
  double covered = region_mass(problem.targets, seen);

  Region support = problem.targets.support();
  Region uncovered = difference(support, seen);
  while (covered < target - 1e-9 * total) {
    if (uncovered.empty() || gs.size() >= params.irs_max_guards) {
      throw std::runtime_error(coverage_error(covered, target, total));
    }
    Point p;
    try {
      p = sample_point_in_region(uncovered, rng, params.irs_sample_attempts);
    } catch (const std::runtime_error&) {
      throw std::runtime_error(coverage_error(covered, target, total));
    }
    Region vis = problem.vis(p);
    gs.guards.push_back(p);
    gs.vis_regions.push_back(vis);
    seen = unite(seen, vis);
    uncovered = difference(uncovered, vis);
    covered = region_mass(problem.targets, seen);
  }
  return gs;
}

}  // namespace detail

/// Generates a guard set covering at least (1 - epsilon) of the target mass.
/// ReflexGreedy runs weighted set cover over reflex vertices plus interior
/// samples; IRS repeatedly samples inside the still-uncovered region.
inline GuardSet place_guards(const EtsProblem& problem, PlacementMethod method,
                             std::uint64_t seed, const PlacementParams& params = {}) {
  if (problem.r_fp != 0.0) {
    throw std::invalid_argument("guard placement requires a point sensor (r_fp = 0)");
  }
  if (!problem.env.contains(problem.start)) {
    throw std::invalid_argument("start configuration not in free space");
  }
  std::mt19937_64 rng(seed);
  return method == PlacementMethod::ReflexGreedy ? detail::place_reflex_greedy(problem, rng, params)
                                                 : detail::place_irs(problem, rng, params);
}

struct GuardMetrics {
  int n_g = 0;
  double o_g = 0.0;  // visibility overlap ratio, 0 when regions are disjoint
};

inline GuardMetrics guard_metrics(const GuardSet& gs) {
  GuardMetrics m;
  m.n_g = gs.size();
  double sum = 0.0;
  Region u;
  for (const Region& r : gs.vis_regions) {
    sum += area(r);
    u = unite(u, r);
  }
  double union_area = area(u);
  m.o_g = union_area > 0.0 ? sum / union_area - 1.0 : 0.0;
  if (m.o_g < 0.0) m.o_g = 0.0;
  return m;
}

}  // namespace milaps
