#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "milaps/gspt.hpp"
#include "milaps/placement.hpp"
#include "milaps/solver.hpp"
#include "milaps/weights.hpp"

namespace milaps {

enum class SensPolicy { Dets, Ets };

/// Replanning schedule: boolean flags over route positions 1..n. The k-th
/// replanning index is round(sum_{j=0..k} T0 * coeff^j) with
/// T0 = (n+1) / sum_{j=0..cnt} coeff^j, kept only while it lands within the
/// route; rounding is half-away-from-zero.
struct ReplanSchedule {
  int cnt = 1;
  double coeff = 1.0;
  std::vector<bool> flags;  // flags[i-1] marks a replan after the i-th guard

  int realized() const {
    int c = 0;
    for (bool f : flags) c += f ? 1 : 0;
    return c;
  }
};

inline ReplanSchedule replan_schedule(int n, int cnt, double coeff) {
  if (n < 1 || cnt < 1 || coeff < 1.0) {
    throw std::invalid_argument("replan_schedule requires n >= 1, cnt >= 1, coeff >= 1");
  }
  ReplanSchedule s;
  s.cnt = cnt;
  s.coeff = coeff;
  s.flags.assign(n, false);
  double denom = 0.0;
  for (int j = 0; j <= cnt; ++j) denom += std::pow(coeff, j);
  double t0 = (n + 1) / denom;
  double acc = t0;  // j = 0 term
  for (int k = 1; k <= n; ++k) {
    acc += t0 * std::pow(coeff, k);
    long long ik = std::llround(acc);
    if (ik > n) break;  // indices only grow from here
    if (ik >= 1) s.flags[ik - 1] = true;
  }
  return s;
}

struct ReplanningConfig {
  int cnt = 8;
  double coeff = 1.25;
  SensPolicy sens = SensPolicy::Dets;
};

struct MilapsConfig {
  WeightType wtype = WeightType::DisGreedy;
  std::optional<ReplanningConfig> replanning;
  bool evaluate_intermediate = false;  // the '+' variant
  double t_max = 1.0;                  // seconds
  bool virtual_time = false;
  std::uint64_t seed = 0;
  MsGvnsParams solver;
};

/// One recorded solution of the pipeline. The solver-level trace invariant
/// (strictly decreasing objectives) applies per solver run; replanning
/// appends entries optimized under updated weights, so the original-instance
/// objective recorded here is informational.
struct RouteTraceEntry {
  Permutation perm;
  Route route;
  double time = 0.0;             // pipeline seconds when recorded
  double gspt_objective = 0.0;   // objective of perm on the solved instance
  std::optional<double> dets_objective;
  std::optional<double> ets_objective;
};

struct MilapsResult {
  std::vector<RouteTraceEntry> entries;
  std::size_t best_index = 0;
  GsptInstance instance;  // weighted instance the base solver ran on
  WeightAssignment weights;
};

/// Discrete-sensing objective of a permutation: latency times first-detection
/// probability, with newly seen regions clipped in visit order.
inline double dets_objective(const GsptInstance& inst, const GuardSet& gs,
                             const TargetDistribution& targets, const Permutation& p) {
  double total = targets.total_mass();
  std::vector<double> lat = latencies(inst, p);
  Region seen;
  double obj = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const Region& vis = gs.vis_regions[p[i]];
    Region newly = seen.empty() ? vis : difference(vis, seen);
    double mass = region_mass(targets, newly);
    if (mass > 0.0) obj += lat[i] * (mass / total);
    seen = seen.empty() ? vis : unite(seen, vis);
  }
  return obj;
}

namespace detail {

inline Budget make_budget(const MilapsConfig& config, double seconds) {
  return config.virtual_time ? Budget::virtual_time(seconds) : Budget::wall(seconds);
}

inline void select_best(MilapsResult& result, const GuardSet& gs,
                        const TargetDistribution& targets, bool evaluate_intermediate) {
  result.best_index = result.entries.empty() ? 0 : result.entries.size() - 1;
  if (!evaluate_intermediate) return;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < result.entries.size(); ++k) {
    double obj = dets_objective(result.instance, gs, targets, result.entries[k].perm);
    result.entries[k].dets_objective = obj;
    if (obj < best) {
      best = obj;
      result.best_index = k;
    }
  }
}

}  // namespace detail

/// Transforms the guard set into a weighted instance, runs the anytime
/// solver, and realizes every recorded permutation as a route.
inline MilapsResult milaps_solve(const EtsProblem& problem, const GuardSet& gs,
                                 const PathMatrix& matrix, const MilapsConfig& config) {
  MilapsResult result;
  result.instance = build_instance(matrix, problem.time_model, problem.start_heading);
  result.weights = compute_weights(config.wtype, result.instance, gs, problem.targets);
  result.instance.set_weights(result.weights.weights);

  SolutionTrace trace = ms_gvns(result.instance, detail::make_budget(config, config.t_max),
                                config.seed, config.solver);
  for (const auto& e : trace.entries) {
    RouteTraceEntry entry;
    entry.perm = e.perm;
    entry.route = assemble_route(matrix, e.perm);
    entry.time = e.time;
    entry.gspt_objective = e.objective;
    result.entries.push_back(std::move(entry));
  }
  detail::select_best(result, gs, problem.targets, config.evaluate_intermediate);
  return result;
}

/// Replanning variant: after traversing each guard the weight-defining
/// regions lose what has been sensed; at scheduled positions the tail is
/// re-optimized on the induced subgraph with refreshed weights and the new
/// start at the current guard.
inline MilapsResult milaps_replan_solve(const EtsProblem& problem, const GuardSet& gs,
                                        const PathMatrix& matrix, const MilapsConfig& config,
                                        VisibilityCache* cache = nullptr) {
  if (!config.replanning) throw std::invalid_argument("replanning configuration missing");
  if (config.wtype == WeightType::Const) {
    throw std::invalid_argument("replanning requires weight-defining regions (wtype != Const)");
  }
  const int n = gs.size() - 1;

  MilapsResult result;
  result.instance = build_instance(matrix, problem.time_model, problem.start_heading);
  result.weights = compute_weights(config.wtype, result.instance, gs, problem.targets);
  result.instance.set_weights(result.weights.weights);

  ReplanSchedule schedule;
  if (n >= 1) schedule = replan_schedule(n, config.replanning->cnt, config.replanning->coeff);
  double t_step = config.t_max / (1.0 + schedule.realized());

  double pipeline_time = 0.0;
  SolutionTrace trace =
      ms_gvns(result.instance, detail::make_budget(config, t_step), config.seed, config.solver);
  for (const auto& e : trace.entries) {
    RouteTraceEntry entry;
    entry.perm = e.perm;
    entry.route = assemble_route(matrix, e.perm);
    entry.time = e.time;
    entry.gspt_objective = e.objective;
    result.entries.push_back(std::move(entry));
  }
  pipeline_time += trace.total_time;

  Permutation current = trace.best().perm;
  std::vector<Region> regions = result.weights.regions;
  std::vector<int> vertices;  // still-unvisited vertices, ascending
  for (int v = 0; v < gs.size(); ++v) vertices.push_back(v);

  BBox bb = problem.env.bbox();
  int b = result.instance.start();
  for (int r = 1; r <= n; ++r) {
    int a = current[r];
    vertices.erase(std::find(vertices.begin(), vertices.end(), b));
    if (config.replanning->sens == SensPolicy::Dets) {
      for (int v : vertices) regions[v] = difference(regions[v], gs.vis_regions[a]);
    } else {
      // what the continuous sensing policy observes while traversing the leg
      const PathEntry& leg = matrix[b][a];
      Region leg_seen;
      if (leg.degenerate) {
        leg_seen = gs.vis_regions[a];
      } else {
        SensingSequence s = ets_sensing_policy(leg.polyline, problem.r_vis, bb.width(), bb.height());
        for (const Point& c : s.configs) leg_seen = unite(leg_seen, problem.vis(c, cache));
      }
      for (int v : vertices) regions[v] = difference(regions[v], leg_seen);
    }
    if (schedule.flags[r - 1] && static_cast<int>(vertices.size()) > 1) {
      GsptInstance sub = result.instance.induced(vertices, a);
      std::vector<double> w(vertices.size());
      std::vector<double> sc(vertices.size(), 0.0);
      for (std::size_t k = 0; k < vertices.size(); ++k) {
        w[k] = region_mass(problem.targets, regions[vertices[k]]);
        // arrival heading at the new start defines its turning costs
        sc[k] = result.instance.turn_cost(b, a, vertices[k]);
      }
      apply_weight_floor(w, problem.targets);
      sub.set_weights(std::move(w));
      sub.set_start_costs(std::move(sc));

      SolutionTrace sub_trace = ms_gvns(sub, detail::make_budget(config, t_step),
                                        config.seed + static_cast<std::uint64_t>(r), config.solver);
      const Permutation& tail = sub_trace.best().perm;
      for (int i = r; i <= n; ++i) current.order[i] = vertices[tail[i - r]];

      pipeline_time += sub_trace.total_time;
      RouteTraceEntry entry;
      entry.perm = current;
      entry.route = assemble_route(matrix, current);
      entry.time = pipeline_time;
      entry.gspt_objective = objective(result.instance, current);
      result.entries.push_back(std::move(entry));
    }
    b = a;
  }
  detail::select_best(result, gs, problem.targets, config.evaluate_intermediate);
  return result;
}

// ---------------------------------------------------------------------------
// Full decoupled pipeline
// ---------------------------------------------------------------------------

struct EtsReport {
  GuardSet guards;
  GuardMetrics metrics;
  MilapsResult solution;
  std::size_t best_index = 0;
  double et = 0.0;
  double covered_prob = 0.0;
  double t_placement = 0.0;
  double t_matrix = 0.0;
  double t_solve = 0.0;
  double t_eval = 0.0;
};

/// Expected-time objective of a route under the evaluated continuous sensing
/// policy.
inline EtResult ets_objective(const EtsProblem& problem, const Route& route,
                              VisibilityCache* cache = nullptr) {
  BBox bb = problem.env.bbox();
  SensingSequence s = ets_sensing_policy(route.polyline, problem.r_vis, bb.width(), bb.height());
  return evaluate_et(problem, route.polyline, s, cache);
}

/// Decoupling scheme: guard placement, path matrix, discrete-sensing solve,
/// then optional re-scoring of all recorded routes under the continuous
/// policy ('+').
inline EtsReport solve_ets(const EtsProblem& problem, PlacementMethod method,
                           const MilapsConfig& config, std::uint64_t placement_seed = 0,
                           VisibilityCache* cache = nullptr) {
  using Clock = std::chrono::steady_clock;
  EtsReport report;

  auto t0 = Clock::now();
  report.guards = place_guards(problem, method, placement_seed);
  report.metrics = guard_metrics(report.guards);
  auto t1 = Clock::now();
  report.t_placement = std::chrono::duration<double>(t1 - t0).count();

  PathMatrix matrix = shortest_path_matrix(problem.env, report.guards.guards);
  auto t2 = Clock::now();
  report.t_matrix = std::chrono::duration<double>(t2 - t1).count();

  MilapsConfig inner = config;
  inner.evaluate_intermediate = false;  // '+' means continuous re-scoring here
  report.solution = config.replanning
                        ? milaps_replan_solve(problem, report.guards, matrix, inner, cache)
                        : milaps_solve(problem, report.guards, matrix, inner);
  auto t3 = Clock::now();
  report.t_solve = std::chrono::duration<double>(t3 - t2).count();

  report.best_index = report.solution.entries.size() - 1;
  if (config.evaluate_intermediate) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < report.solution.entries.size(); ++k) {
      EtResult r = ets_objective(problem, report.solution.entries[k].route, cache);
      report.solution.entries[k].ets_objective = r.et;
      if (r.et < best) {
        best = r.et;
        report.best_index = k;
      }
    }
  }
  EtResult final_eval = ets_objective(problem, report.solution.entries[report.best_index].route, cache);
  report.et = final_eval.et;
  report.covered_prob = final_eval.covered_prob;
  report.t_eval = std::chrono::duration<double>(Clock::now() - t3).count();
  return report;
}

}  // namespace milaps
