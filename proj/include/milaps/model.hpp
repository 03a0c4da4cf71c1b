#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "milaps/geometry.hpp"
#include "milaps/visibility.hpp"

namespace milaps {

/// Linear combination of path length and accumulated turning angle.
struct TravelTimeModel {
  double t_lin = 1.0;  // seconds per meter
  double t_ang = 0.0;  // seconds per radian
};

/// Travel time along `path` up to arc-length parameter nu in [0,1]. Turning
/// at an interior vertex is charged once the vertex is passed, so a stop
/// exactly on a vertex excludes that vertex's turn.
inline double travel_time(const TravelTimeModel& tm, const Polyline& path, double nu) {
  if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("path parameter outside [0,1]");
  const auto& v = path.vertices;
  if (v.size() < 2) return 0.0;
  double total = path.length();
  if (total <= 0.0) return 0.0;
  double target = nu * total;
  double eps = 1e-9 * std::max(1.0, total);
  double cum = 0.0;
  double turn = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double seg = dist(v[i - 1], v[i]);
    if (cum + seg >= target - eps) break;  // target within this segment or at its end
    cum += seg;
    if (i + 1 < v.size()) {
      Point d1 = v[i] - v[i - 1];
      Point d2 = v[i + 1] - v[i];
      turn += turn_angle(std::atan2(d1.y, d1.x), std::atan2(d2.y, d2.x));
    }
  }
  return tm.t_lin * target + tm.t_ang * turn;
}

/// Object location distribution as weighted target regions.
struct TargetDistribution {
  struct Entry {
    double weight = 1.0;
    Region region;
  };
  std::vector<Entry> regions;

  double total_mass() const {
    double m = 0.0;
    for (const Entry& e : regions) m += e.weight * area(e.region);
    return m;
  }

  Region support() const {
    Region s;
    for (const Entry& e : regions) s = unite(s, e.region);
    return s;
  }
};

/// w(X | P): weighted mass of the target distribution inside X.
inline double region_mass(const TargetDistribution& targets, const Region& x) {
  double m = 0.0;
  for (const auto& e : targets.regions) m += e.weight * area(intersect(e.region, x));
  return m;
}

/// Complete problem instance for expected-time search.
struct EtsProblem {
  PolygonalEnvironment env;
  double r_fp = 0.0;
  double r_vis = kUnboundedRange;
  TravelTimeModel time_model;
  TargetDistribution targets;
  Point start;
  std::optional<double> start_heading;
  double epsilon = 1e-5;

  Region vis(Point q, VisibilityCache* cache = nullptr) const {
    return cache ? cache->get(env, q, r_vis) : visibility_region(env, q, r_vis);
  }
};

/// Discrete sensing events along a path: configurations plus strictly
/// increasing arc-length parameters.
struct SensingSequence {
  std::vector<Point> configs;
  std::vector<double> params;
};

/// Max sensing sample spacing for the evaluated continuous policy.
inline double sens_sample_distance(double r_vis, double map_width, double map_height) {
  return std::min(0.5 * r_vis, std::hypot(map_width, map_height) / 100.0);
}

/// Equidistant sensing along every segment with spacing <= d_sens, always
/// including the segment endpoints.
inline SensingSequence ets_sensing_policy(const Polyline& path, double r_vis, double map_width,
                                          double map_height) {
  SensingSequence s;
  const auto& v = path.vertices;
  if (v.empty()) return s;
  double d_sens = sens_sample_distance(r_vis, map_width, map_height);
  if (!(d_sens > 0.0)) throw std::invalid_argument("sensing sample spacing must be positive");
  double total = path.length();
  s.configs.push_back(v.front());
  s.params.push_back(0.0);
  if (total <= 0.0 || v.size() < 2) return s;
  double cum = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double seg = dist(v[i - 1], v[i]);
    int sub = std::max(1, static_cast<int>(std::ceil(seg / d_sens)));
    for (int k = 1; k <= sub; ++k) {
      double f = static_cast<double>(k) / sub;
      s.configs.push_back(v[i - 1] + (v[i] - v[i - 1]) * f);
      s.params.push_back((cum + f * seg) / total);
    }
    cum += seg;
  }
  return s;
}

/// Sensing exclusively at the first visit to each guard (vertex coincidence
/// within 1e-6 m), ordered along the path.
inline SensingSequence dets_sensing_policy(const Polyline& path, const std::vector<Point>& guards) {
  constexpr double kGuardTol = 1e-6;
  const auto& v = path.vertices;
  double total = path.length();
  std::vector<double> first_visit(guards.size(), -1.0);
  double cum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) cum += dist(v[i - 1], v[i]);
    for (std::size_t g = 0; g < guards.size(); ++g) {
      if (first_visit[g] < 0.0 && near(v[i], guards[g], kGuardTol)) {
        first_visit[g] = total > 0.0 ? cum / total : 0.0;
      }
    }
  }
  std::vector<std::size_t> missing;
  for (std::size_t g = 0; g < guards.size(); ++g) {
    if (first_visit[g] < 0.0) missing.push_back(g);
  }
  if (!missing.empty()) {
    std::string msg = "path never visits guard(s):";
    for (std::size_t g : missing) msg += " " + std::to_string(g);
    throw std::invalid_argument(msg);
  }
  std::vector<std::size_t> order(guards.size());
  for (std::size_t g = 0; g < guards.size(); ++g) order[g] = g;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return first_visit[a] < first_visit[b]; });
  SensingSequence s;
  for (std::size_t g : order) {
    s.configs.push_back(guards[g]);
    s.params.push_back(first_visit[g]);
  }
  return s;
}

struct EtResult {
  double et = 0.0;            // expected detection time [s]
  double covered_prob = 0.0;  // detection probability by the end of the path
  double prob_sum = 0.0;      // sum of per-event first-detection probabilities
};

/// Tractable expected-time objective: sums travel time times the probability
/// of first detection over the sensing sequence.
inline EtResult evaluate_et(const EtsProblem& problem, const Polyline& path,
                            const SensingSequence& sensing, VisibilityCache* cache = nullptr) {
  double total_mass = problem.targets.total_mass();
  if (!(total_mass > 0.0)) throw std::invalid_argument("target distribution has zero mass");
  EtResult res;
  Region seen;
  for (std::size_t i = 0; i < sensing.configs.size(); ++i) {
    Point s = sensing.configs[i];
    if (!problem.env.contains(s)) {
      throw std::invalid_argument("sensing configuration outside free space");
    }
    Region vis = problem.vis(s, cache);
    Region newly = seen.empty() ? vis : difference(vis, seen);
    double p = region_mass(problem.targets, newly) / total_mass;
    if (p > 0.0) {
      res.et += travel_time(problem.time_model, path, sensing.params[i]) * p;
      res.prob_sum += p;
    }
    seen = seen.empty() ? std::move(vis) : unite(seen, vis);
  }
  res.covered_prob = std::min(1.0, region_mass(problem.targets, seen) / total_mass);
  return res;
}

}  // namespace milaps
