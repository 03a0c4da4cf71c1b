#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "milaps/gspt.hpp"

namespace milaps {

/// Time budget for the anytime solver. Wall mode reads the steady clock;
/// virtual mode counts evaluation operations at a fixed rate, which makes
/// runs reproducible.
class Budget {
 public:
  static constexpr double kTicksPerVirtualSecond = 2e6;

  static Budget wall(double seconds) {
    Budget b;
    b.t_max_ = seconds;
    b.virtual_ = false;
    b.start_ = std::chrono::steady_clock::now();
    return b;
  }

  static Budget virtual_time(double seconds, double ticks_per_second = kTicksPerVirtualSecond) {
    Budget b;
    b.t_max_ = seconds;
    b.virtual_ = true;
    b.rate_ = ticks_per_second;
    return b;
  }

  void tick(std::uint64_t n = 1) { ticks_ += n; }

  double elapsed() const {
    if (virtual_) return static_cast<double>(ticks_) / rate_;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool exceeded() const { return elapsed() >= t_max_; }
  double t_max() const { return t_max_; }
  bool is_virtual() const { return virtual_; }

 private:
  double t_max_ = 0.0;
  bool virtual_ = false;
  double rate_ = kTicksPerVirtualSecond;
  std::uint64_t ticks_ = 0;
  std::chrono::steady_clock::time_point start_{};
};

/// Improving incumbents found by the solver, in discovery order.
struct SolutionTrace {
  struct Entry {
    Permutation perm;
    double objective = 0.0;
    double time = 0.0;  // seconds since solver start
  };
  std::vector<Entry> entries;
  double total_time = 0.0;  // seconds the run consumed overall

  bool empty() const { return entries.empty(); }
  const Entry& best() const { return entries.back(); }
};

// ---------------------------------------------------------------------------
// Auxiliary structures for O(1) move improvements
// ---------------------------------------------------------------------------

/// Per-position prefix structures for a fixed permutation. Rebuilt in O(eta)
/// after each accepted move.
struct AuxStructures {
  const GsptInstance* inst = nullptr;
  const Permutation* sigma = nullptr;
  std::vector<double> w;      // w_k = w(sigma(k))
  std::vector<double> delta;  // latency prefix
  std::vector<double> gamma;  // weight prefix (gamma_0 = 0)
  std::vector<double> omega;  // delta_k * w_k
  std::vector<double> f;      // objective prefix
  std::vector<double> psi;    // turning-weight prefix, zero at both ends

  double d(int j, int k) const { return inst->travel((*sigma)[j], (*sigma)[k]); }

  double theta(int i, int j, int k) const {
    return i == -1 ? inst->start_cost((*sigma)[k])
                   : inst->turn_cost((*sigma)[i], (*sigma)[j], (*sigma)[k]);
  }

  double xi(int i, int j, int k) const { return theta(i, j, k) + d(j, k); }
};

inline AuxStructures build_aux(const GsptInstance& inst, const Permutation& sigma) {
  AuxStructures a;
  a.inst = &inst;
  a.sigma = &sigma;
  int eta = sigma.size();
  a.w.resize(eta);
  a.delta.assign(eta, 0.0);
  a.gamma.assign(eta, 0.0);
  a.omega.assign(eta, 0.0);
  a.f.assign(eta, 0.0);
  a.psi.assign(eta, 0.0);
  for (int k = 0; k < eta; ++k) a.w[k] = inst.weight(sigma[k]);
  for (int k = 1; k < eta; ++k) {
    a.delta[k] = a.delta[k - 1] + a.xi(k - 2, k - 1, k);
    a.gamma[k] = a.gamma[k - 1] + a.w[k];
    a.omega[k] = a.delta[k] * a.w[k];
    a.f[k] = a.f[k - 1] + a.omega[k];
    a.psi[k] = k == eta - 1 ? 0.0 : a.psi[k - 1] + a.w[k] * a.theta(k - 1, k, k + 1);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Move application
// ---------------------------------------------------------------------------

/// Swaps the string of length x after position i (exclusive) with the string
/// of length y after position j. Assumes i < j.
inline Permutation apply_2string(const Permutation& p, int i, int j, int x, int y) {
  Permutation q;
  q.order.reserve(p.order.size());
  auto push_range = [&](int lo, int hi) {  // inclusive
    for (int k = lo; k <= hi; ++k) q.order.push_back(p[k]);
  };
  push_range(0, i);
  push_range(j + 1, j + y);
  push_range(i + x + 1, j);
  push_range(i + 1, i + x);
  push_range(j + y + 1, p.size() - 1);
  return q;
}

/// Reverses positions i..j inclusive.
inline Permutation apply_2opt(const Permutation& p, int i, int j) {
  Permutation q = p;
  std::reverse(q.order.begin() + i, q.order.begin() + j + 1);
  return q;
}

namespace detail {

inline void check_2string_domain(int eta, int i, int j, int x, int y) {
  bool ok = x >= 0 && y >= 0 && x <= eta - 1 && y <= eta - 1 && x + y <= eta - 1 && i >= 0 &&
            j >= 0 && i <= eta - x - 1 && j <= eta - y - 1 && (j - i >= x || i - j >= y);
  if (!ok) throw std::invalid_argument("2string parameters outside domain");
}

}  // namespace detail

/// Exact objective change of 2string(sigma, i, j, x, y) in O(1). Handles both
/// symmetric and asymmetric instances. Parameters are normalized through the
/// operator symmetry 2string(i,j,x,y) = 2string(j,i,y,x).
inline double delta_2string(const AuxStructures& a, int i, int j, int x, int y) {
  const int eta = a.sigma->size();
  detail::check_2string_domain(eta, i, j, x, y);
  if (i > j) {
    std::swap(i, j);
    std::swap(x, y);
  }
  if (i == j || (x == 0 && y == 0) || (y == 0 && j == i + x)) return 0.0;  // identity moves

  const auto& w = a.w;
  const auto& delta = a.delta;
  const auto& gamma = a.gamma;
  const auto& omega = a.omega;

  double l1 = y == 0 ? 0.0 : delta[i] + a.xi(i - 1, i, j + 1);
  double l2 = l1 + (y <= 1 ? 0.0 : a.xi(i, j + 1, j + 2) - delta[j + 2]);
  double l3 = l2;
  if (i + x != j) {
    if (y == 0) l3 += delta[i] + a.xi(i - 1, i, i + x + 1);
    else if (y == 1) l3 += a.xi(i, j + y, i + x + 1);
    else l3 += delta[j + y] + a.xi(j + y - 1, j + y, i + x + 1);
  }
  double l4 = l3;
  if (i + x + 1 < j) {
    if (y == 0) l4 += a.xi(i, i + x + 1, i + x + 2) - delta[i + x + 2];
    else l4 += a.xi(j + y, i + x + 1, i + x + 2) - delta[i + x + 2];
  }
  double l5 = l4;
  if (x != 0) {
    if (y == 1 && i + x == j) l5 += a.xi(i, j + y, i + 1);
    else if (i + x == j) l5 += delta[j + y] + a.xi(j + y - 1, j + y, i + 1);
    else if (y == 0 && i + x + 1 == j) l5 += a.xi(i, j, i + 1);
    else if (i + x + 1 == j) l5 += a.xi(j + y, j, i + 1);
    else l5 += delta[j] + a.xi(j - 1, j, i + 1);
  }
  double l6 = l5;
  if (x > 1) {
    if (i + x == j) l6 += a.xi(j + y, i + 1, i + 2) - delta[i + 2];
    else l6 += a.xi(j, i + 1, i + 2) - delta[i + 2];
  }
  double l7 = l6;
  if (j + y != eta - 1) {
    if (i + x + 1 == j && x == 0) l7 += a.xi(j + y, j, j + y + 1);
    else if (x == 0) l7 += delta[j] + a.xi(j - 1, j, j + y + 1);
    else if (i + x == j && x == 1) l7 += a.xi(j + y, i + x, j + y + 1);
    else if (x == 1) l7 += a.xi(j, i + x, j + y + 1);
    else l7 += delta[i + x] + a.xi(i + x - 1, i + x, j + y + 1);
  }
  double l8 = l7;
  if (j + y + 1 < eta - 1) {
    if (x == 0) l8 += a.xi(j, j + y + 1, j + y + 2) - delta[j + y + 2];
    else l8 += a.xi(i + x, j + y + 1, j + y + 2) - delta[j + y + 2];
  }

  double res = 0.0;
  if (y != 0) res += l1 * w[j + 1] - omega[j + 1];
  if (y > 1) res += l2 * (gamma[j + y] - gamma[j + 1]);
  if (i + x != j) res += l3 * w[i + x + 1] - omega[i + x + 1];
  if (i + x + 1 < j) res += l4 * (gamma[j] - gamma[i + x + 1]);
  if (x != 0) res += l5 * w[i + 1] - omega[i + 1];
  if (x > 1) res += l6 * (gamma[i + x] - gamma[i + 1]);
  if (j + y != eta - 1) res += l7 * w[j + y + 1] - omega[j + y + 1];
  if (j + y + 1 < eta - 1) res += l8 * (gamma[eta - 1] - gamma[j + y + 1]);
  return res;
}

/// Exact objective change of 2opt(sigma, i, j) in O(1). Requires a symmetric
/// instance; asymmetric instances must use direct recomputation instead.
inline double delta_2opt(const AuxStructures& a, int i, int j) {
  const int eta = a.sigma->size();
  if (i < 1 || j <= i || j > eta - 1) throw std::invalid_argument("2opt parameters outside domain");
  if (!a.inst->symmetric()) {
    throw std::logic_error("O(1) 2opt improvement requires a symmetric instance");
  }
  const auto& w = a.w;
  const auto& delta = a.delta;
  const auto& gamma = a.gamma;
  const auto& f = a.f;
  const auto& psi = a.psi;

  double l1 = a.xi(i - 2, i - 1, j);
  double l2 = l1 + a.theta(i - 1, j, j - 1);
  double res = 2.0 * f[i - 1] + w[j] * (delta[i - 1] + l1 + delta[j]) + psi[i - 1] - psi[j - 1] +
               (delta[i - 1] + l2 + delta[j]) * (gamma[j - 1] - gamma[i - 1]);
  if (j == eta - 1) {
    res -= 2.0 * f[eta - 1];
  } else {
    double l3 = l2 - a.xi(i - 2, i - 1, i) - a.theta(i - 1, i, i + 1) + a.xi(i + 1, i, j + 1) -
                a.xi(j - 1, j, j + 1);
    double l4 = l3 + (j == eta - 2 ? 0.0 : a.theta(i, j + 1, j + 2) - a.theta(j, j + 1, j + 2));
    res += w[j + 1] * (2.0 * delta[j + 1] + l3) + l4 * (gamma[eta - 1] - gamma[j + 1]) -
           2.0 * f[j + 1];
  }
  return res;
}

// ---------------------------------------------------------------------------
// Local search
// ---------------------------------------------------------------------------

struct Move {
  enum class Kind { TwoOpt, TwoString };
  Kind kind = Kind::TwoOpt;
  int i = 0, j = 0, x = 0, y = 0;
  double delta = 0.0;
};

namespace detail {

// Objective change by direct recomputation; the fallback for 2opt on
// asymmetric instances.
inline double recompute_delta(const GsptInstance& inst, const Permutation& p, double obj,
                              const Move& m) {
  Permutation q = m.kind == Move::Kind::TwoOpt ? apply_2opt(p, m.i, m.j)
                                               : apply_2string(p, m.i, m.j, m.x, m.y);
  return objective(inst, q) - obj;
}

}  // namespace detail

struct VndParams {
  // relocate string lengths tried for the 2string operator, plus the swap
  std::vector<int> relocate_lengths{1, 2, 3};
  bool use_swap = true;
  double min_gain = 1e-11;
};

/// Variable neighborhood descent: 2opt, then string relocations and the unit
/// swap, first improvement, restarting the operator sequence after every
/// accepted move. Returns a local optimum; the objective never increases.
inline Permutation vnd(const GsptInstance& inst, Permutation sigma, Budget* budget = nullptr,
                       const VndParams& params = {}) {
  check_permutation(inst, sigma);
  const int eta = sigma.size();
  if (eta <= 2) return sigma;
  double obj = objective(inst, sigma);
  AuxStructures aux = build_aux(inst, sigma);
  const bool symmetric = inst.symmetric();
  double gain_eps = params.min_gain * (1.0 + std::abs(obj));

  auto accept = [&](const Move& m) {
    sigma = m.kind == Move::Kind::TwoOpt ? apply_2opt(sigma, m.i, m.j)
                                         : apply_2string(sigma, m.i, m.j, m.x, m.y);
    obj += m.delta;
    aux = build_aux(inst, sigma);
    if (budget) budget->tick(static_cast<std::uint64_t>(eta));
  };

  auto try_2opt = [&](Move& out) {
    for (int i = 1; i <= eta - 2; ++i) {
      for (int j = i + 1; j <= eta - 1; ++j) {
        double d;
        if (symmetric) {
          d = delta_2opt(aux, i, j);
          if (budget) budget->tick();
        } else {
          Move probe{Move::Kind::TwoOpt, i, j, 0, 0, 0.0};
          d = detail::recompute_delta(inst, sigma, obj, probe);
          if (budget) budget->tick(static_cast<std::uint64_t>(eta));
        }
        if (d < -gain_eps) {
          out = {Move::Kind::TwoOpt, i, j, 0, 0, d};
          return true;
        }
      }
    }
    return false;
  };

  auto try_2string = [&](int x, int y, Move& out) {
    // both placements of the moved string: forward (i,j,x,y) and the
    // mirrored (i,j,y,x) which relocates leftwards when y of the pair is 0
    for (int i = 0; i <= eta - x - 1; ++i) {
      for (int j = i + x; j <= eta - y - 1; ++j) {
        if (y == 0 && j == i + x) continue;  // identity
        if (j <= i) continue;
        double d = delta_2string(aux, i, j, x, y);
        if (budget) budget->tick();
        if (d < -gain_eps) {
          out = {Move::Kind::TwoString, i, j, x, y, d};
          return true;
        }
      }
    }
    return false;
  };

  bool improved = true;
  while (improved) {
    if (budget && budget->exceeded()) break;
    improved = false;
    Move m;
    if (try_2opt(m)) {
      accept(m);
      improved = true;
      continue;
    }
    bool found = false;
    for (int len : params.relocate_lengths) {
      if (len > eta - 2) break;
      if (try_2string(len, 0, m) || try_2string(0, len, m)) {
        found = true;
        break;
      }
    }
    if (!found && params.use_swap && eta >= 3) found = try_2string(1, 1, m);
    if (found) {
      accept(m);
      improved = true;
    }
    gain_eps = params.min_gain * (1.0 + std::abs(obj));
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Construction and perturbation
// ---------------------------------------------------------------------------

/// Greedy construction minimizing the cost-to-weight ratio of the next
/// vertex. With randomization r > 0 each step picks uniformly among the
/// ceil(r * remaining) best candidates.
inline Permutation greedy_initial(const GsptInstance& inst, double randomization,
                                  std::mt19937_64& rng, Budget* budget = nullptr) {
  const int eta = inst.size();
  Permutation p;
  p.order.reserve(eta);
  p.order.push_back(inst.start());
  std::vector<int> remaining;
  remaining.reserve(eta - 1);
  for (int v = 0; v < eta; ++v) {
    if (v != inst.start()) remaining.push_back(v);
  }
  struct Cand {
    double ratio;
    int vertex;
    int pos;  // position in `remaining`
  };
  std::vector<Cand> cands;
  for (int i = 1; i < eta; ++i) {
    cands.clear();
    int prev = p.order[i - 1];
    int prev2 = i >= 2 ? p.order[i - 2] : -1;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      int v = remaining[k];
      double cost = (i == 1 ? inst.start_cost(v) : inst.turn_cost(prev2, prev, v)) +
                    inst.travel(prev, v);
      cands.push_back({cost / inst.weight(v), v, static_cast<int>(k)});
      if (budget) budget->tick();
    }
    std::size_t pick = 0;
    if (randomization > 0.0 && cands.size() > 1) {
      std::size_t m = static_cast<std::size_t>(
          std::ceil(randomization * static_cast<double>(cands.size())));
      m = std::clamp<std::size_t>(m, 1, cands.size());
      std::partial_sort(cands.begin(), cands.begin() + m, cands.end(), [](const Cand& a, const Cand& b) {
        return a.ratio < b.ratio || (a.ratio == b.ratio && a.vertex < b.vertex);
      });
      pick = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    } else {
      for (std::size_t k = 1; k < cands.size(); ++k) {
        if (cands[k].ratio < cands[pick].ratio ||
            (cands[k].ratio == cands[pick].ratio && cands[k].vertex < cands[pick].vertex)) {
          pick = k;
        }
      }
    }
    p.order.push_back(cands[pick].vertex);
    remaining.erase(remaining.begin() + cands[pick].pos);
  }
  return p;
}

namespace detail {

inline Permutation shake(const Permutation& p, int intensity, std::mt19937_64& rng) {
  const int eta = p.size();
  Permutation q = p;
  if (eta <= 2) return q;
  for (int step = 0; step < intensity; ++step) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      int x = std::uniform_int_distribution<int>(1, std::min(3, eta - 2))(rng);
      int y = std::uniform_int_distribution<int>(0, 1)(rng);
      int min_j_off = y == 0 ? x + 1 : x;  // skip identity relocations
      if (eta - 1 - y - min_j_off < 0) continue;
      int i = std::uniform_int_distribution<int>(0, eta - 1 - x)(rng);
      int j_lo = i + min_j_off;
      int j_hi = eta - 1 - y;
      if (j_lo > j_hi) continue;
      int j = std::uniform_int_distribution<int>(j_lo, j_hi)(rng);
      if (i + x > j) continue;
      q = apply_2string(q, i, j, x, y);
      break;
    }
  }
  return q;
}

}  // namespace detail

struct MsGvnsParams {
  int k_max = 5;                    // shake intensity cycles 1..k_max
  double restart_randomization = 0.2;
  VndParams vnd;
};

/// Anytime multi-start generalized variable neighborhood search. Records
/// every strictly improving incumbent with a timestamp; respects the budget
/// within one local-search pass.
inline SolutionTrace ms_gvns(const GsptInstance& inst, Budget budget, std::uint64_t seed,
                             const MsGvnsParams& params = {}) {
  std::mt19937_64 rng(seed);
  SolutionTrace trace;
  const int eta = inst.size();
  if (eta < 1) throw std::invalid_argument("ms_gvns: empty instance");

  auto record = [&](const Permutation& p, double obj) {
    if (trace.entries.empty() ||
        obj < trace.entries.back().objective - 1e-12 * (1.0 + std::abs(obj))) {
      trace.entries.push_back({p, obj, budget.elapsed()});
      return true;
    }
    return false;
  };

  bool first_start = true;
  Permutation global_best;
  double global_best_obj = std::numeric_limits<double>::infinity();
  while (true) {
    Permutation incumbent = greedy_initial(inst, first_start ? 0.0 : params.restart_randomization,
                                           rng, &budget);
    first_start = false;
    incumbent = vnd(inst, std::move(incumbent), &budget, params.vnd);
    double incumbent_obj = objective(inst, incumbent);
    if (incumbent_obj < global_best_obj) {
      global_best = incumbent;
      global_best_obj = incumbent_obj;
      record(incumbent, incumbent_obj);
    }
    if (eta <= 2) break;

    int k = 1;
    int non_improving = 0;
    while (!budget.exceeded() && non_improving < params.k_max) {
      Permutation shaken = detail::shake(incumbent, k, rng);
      budget.tick(static_cast<std::uint64_t>(eta));
      shaken = vnd(inst, std::move(shaken), &budget, params.vnd);
      double obj = objective(inst, shaken);
      if (obj < incumbent_obj - 1e-12 * (1.0 + std::abs(incumbent_obj))) {
        incumbent = std::move(shaken);
        incumbent_obj = obj;
        k = 1;
        non_improving = 0;
        if (incumbent_obj < global_best_obj) {
          global_best = incumbent;
          global_best_obj = incumbent_obj;
          record(incumbent, incumbent_obj);
        }
      } else {
        k = k % params.k_max + 1;
        ++non_improving;
      }
    }
    if (budget.exceeded()) break;
  }
  trace.total_time = budget.elapsed();
  return trace;
}

}  // namespace milaps
