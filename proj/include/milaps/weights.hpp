#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "milaps/gspt.hpp"
#include "milaps/placement.hpp"

namespace milaps {

enum class WeightType { Const, Vis, DisSplit, DisMaxW, DisGreedy };

inline const char* weight_type_name(WeightType t) {
  switch (t) {
    case WeightType::Const: return "Const";
    case WeightType::Vis: return "Vis";
    case WeightType::DisSplit: return "DisSplit";
    case WeightType::DisMaxW: return "DisMaxW";
    case WeightType::DisGreedy: return "DisGreedy";
  }
  return "?";
}

/// Static vertex weights plus the weight-defining regions they were computed
/// from (empty for Const).
struct WeightAssignment {
  WeightType type = WeightType::Const;
  std::vector<double> weights;
  std::vector<Region> regions;
};

/// Weights below 1e-9 of the total target mass are clamped up; the objective
/// requires strictly positive weights even when a region ends up empty.
inline double weight_floor(const TargetDistribution& targets) {
  return 1e-9 * targets.total_mass();
}

inline void apply_weight_floor(std::vector<double>& w, const TargetDistribution& targets) {
  double floor = weight_floor(targets);
  for (double& x : w) x = std::max(x, floor);
}

inline WeightAssignment weights_const(int n_vertices) {
  WeightAssignment a;
  a.type = WeightType::Const;
  a.weights.assign(n_vertices, 1.0);
  return a;
}

/// Visibility weights: each guard weighted by its view minus the start's view.
/// Regions may overlap each other.
inline WeightAssignment weights_vis(const GuardSet& gs, const TargetDistribution& targets) {
  WeightAssignment a;
  a.type = WeightType::Vis;
  const Region& start_view = gs.vis_regions[0];
  a.regions.reserve(gs.size());
  for (int v = 0; v < gs.size(); ++v) {
    a.regions.push_back(difference(gs.vis_regions[v], start_view));
    a.weights.push_back(region_mass(targets, a.regions.back()));
  }
  apply_weight_floor(a.weights, targets);
  return a;
}

/// Fair-split disjoint regions: every overlapping pair is divided along the
/// perpendicular bisector, each side keeping the part nearer to its guard.
inline WeightAssignment weights_dissplit(const GuardSet& gs, const TargetDistribution& targets,
                                         std::vector<int> ordering = {}) {
  const int n = gs.size();
  if (ordering.empty()) {
    ordering.resize(n);
    std::iota(ordering.begin(), ordering.end(), 0);
  }
  BBox extent;
  for (const Region& r : gs.vis_regions) extent.expand(region_bbox(r));

  WeightAssignment a;
  a.type = WeightType::DisSplit;
  a.regions = gs.vis_regions;
  for (int oi = 0; oi < n; ++oi) {
    int u = ordering[oi];
    for (int oj = oi + 1; oj < n; ++oj) {
      int v = ordering[oj];
      if (near(gs.guards[u], gs.guards[v])) continue;
      Region h_vu = halfplane_region(gs.guards[v], gs.guards[u], extent);
      a.regions[u] = difference(a.regions[u], intersect(h_vu, a.regions[v]));
      Region h_uv = halfplane_region(gs.guards[u], gs.guards[v], extent);
      a.regions[v] = difference(a.regions[v], intersect(h_uv, a.regions[u]));
    }
  }
  for (const Region& r : a.regions) a.weights.push_back(region_mass(targets, r));
  apply_weight_floor(a.weights, targets);
  return a;
}

/// Utility-maximizing disjoint regions. The start is seeded first and its
/// view subtracted from everyone, then guards are picked greedily: DisMaxW by
/// remaining mass, DisGreedy by mass over travel-plus-turning cost.
inline WeightAssignment weights_dis_utility(const GsptInstance& inst, const GuardSet& gs,
                                            const TargetDistribution& targets, WeightType variant,
                                            std::vector<int>* ordering_out = nullptr) {
  if (variant != WeightType::DisMaxW && variant != WeightType::DisGreedy) {
    throw std::invalid_argument("weights_dis_utility expects DisMaxW or DisGreedy");
  }
  const int n = gs.size();
  WeightAssignment a;
  a.type = variant;
  a.regions = gs.vis_regions;

  std::vector<int> order{0};
  std::vector<int> remaining;
  for (int v = 1; v < n; ++v) remaining.push_back(v);
  for (int v : remaining) a.regions[v] = difference(a.regions[v], a.regions[0]);

  std::vector<double> masses(n, 0.0);
  for (int v : remaining) masses[v] = region_mass(targets, a.regions[v]);

  for (int i = 1; i < n; ++i) {
    int best_pos = -1;
    double best_util = -1.0;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      int v = remaining[k];
      double util = masses[v];
      if (variant == WeightType::DisGreedy) {
        int prev = order[i - 1];
        double turn = i == 1 ? inst.start_cost(v) : inst.turn_cost(order[i - 2], prev, v);
        double denom = turn + inst.travel(prev, v);
        if (denom <= 0.0) denom = 1e-12;
        util = masses[v] / denom;
      }
      if (util > best_util) {
        best_util = util;
        best_pos = static_cast<int>(k);
      }
    }
    int chosen = remaining[best_pos];
    order.push_back(chosen);
    remaining.erase(remaining.begin() + best_pos);
    for (int v : remaining) {
      a.regions[v] = difference(a.regions[v], a.regions[chosen]);
      masses[v] = region_mass(targets, a.regions[v]);
    }
  }
  for (int v = 0; v < n; ++v) a.weights.push_back(region_mass(targets, a.regions[v]));
  apply_weight_floor(a.weights, targets);
  if (ordering_out) *ordering_out = order;
  return a;
}

/// Dispatch over the five schemes. DisGreedy needs the instance costs; the
/// other schemes ignore them.
inline WeightAssignment compute_weights(WeightType type, const GsptInstance& inst,
                                        const GuardSet& gs, const TargetDistribution& targets) {
  switch (type) {
    case WeightType::Const: return weights_const(gs.size());
    case WeightType::Vis: return weights_vis(gs, targets);
    case WeightType::DisSplit: return weights_dissplit(gs, targets);
    case WeightType::DisMaxW:
    case WeightType::DisGreedy: return weights_dis_utility(inst, gs, targets, type);
  }
  throw std::invalid_argument("unknown weight type");
}

}  // namespace milaps
