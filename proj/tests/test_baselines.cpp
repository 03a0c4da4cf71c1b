#include <catch2/catch_amalgamated.hpp>

#include "milaps/baselines.hpp"
#include "milaps/weights.hpp"
#include "support.hpp"

using namespace milaps;

namespace {

struct Fixture {
  EtsProblem problem;
  GuardSet gs;
  PathMatrix matrix;
};

Fixture open_fixture(std::vector<Point> guards, std::vector<Region> views, double span) {
  Fixture f;
  f.problem = testsupport::make_problem(
      PolygonalEnvironment({{-1, -1}, {span, -1}, {span, 2}, {-1, 2}}), guards[0]);
  f.problem.targets.regions.clear();
  f.problem.targets.regions.push_back({1.0, rect_region(-1, -1, span, 2)});
  f.gs.guards = std::move(guards);
  f.gs.vis_regions = std::move(views);
  f.matrix = shortest_path_matrix(f.problem.env, f.gs.guards);
  return f;
}

}  // namespace

TEST_CASE("single-step greedy maximizes mass over cost") {
  // candidate 1 at distance 2 with new mass 4; candidate 2 at distance 1 with
  // new mass 3: utilities 2 vs 3, so candidate 2 goes first
  auto f = open_fixture({{0, 0.5}, {2, 0.5}, {1, 0.5}},
                        {rect_region(20, 0, 20.01, 1), rect_region(4, 0, 8, 1),
                         rect_region(9, 0, 12, 1)},
                        30.0);
  auto inst = build_instance(f.matrix, f.problem.time_model);
  auto res = ugreedy1(f.problem, f.gs, f.matrix, inst);
  REQUIRE(res.perm.order == std::vector<int>{0, 2, 1});
  REQUIRE_FALSE(res.timeout);
}

TEST_CASE("zero-gain candidates sink below any positive utility") {
  // guard 1 sees nothing new (view inside the start's); guard 2 adds mass
  auto f = open_fixture({{0, 0.5}, {0.5, 0.5}, {3, 0.5}},
                        {rect_region(0, 0, 2, 1), rect_region(0.5, 0, 1.5, 1),
                         rect_region(4, 0, 6, 1)},
                        10.0);
  auto inst = build_instance(f.matrix, f.problem.time_model);
  auto res = ugreedy1(f.problem, f.gs, f.matrix, inst);
  REQUIRE(res.perm.order == std::vector<int>{0, 2, 1});
}

TEST_CASE("greedy ordering equals the greedy weight-construction ordering") {
  std::mt19937_64 rng(17);
  auto env = testsupport::random_map(rng, 4);
  auto problem = testsupport::make_problem(env, {1.5, 1.5}, 8.0);
  problem.epsilon = 1e-3;
  auto gs = place_guards(problem, PlacementMethod::IRS, 23);
  auto matrix = shortest_path_matrix(problem.env, gs.guards);
  auto inst = build_instance(matrix, problem.time_model);

  std::vector<int> order;
  weights_dis_utility(inst, gs, problem.targets, WeightType::DisGreedy, &order);
  auto res = ugreedy1(problem, gs, matrix, inst);
  REQUIRE(res.perm.order == order);
}

TEST_CASE("baseline routes visit every guard exactly once") {
  std::mt19937_64 rng(19);
  auto env = testsupport::random_map(rng, 5);
  auto problem = testsupport::make_problem(env, {1.0, 1.0}, 7.0);
  problem.epsilon = 1e-3;
  auto gs = place_guards(problem, PlacementMethod::IRS, 29);
  auto matrix = shortest_path_matrix(problem.env, gs.guards);
  auto inst = build_instance(matrix, problem.time_model);

  for (int variant = 0; variant < 2; ++variant) {
    auto res = variant == 0 ? ugreedy1(problem, gs, matrix, inst)
                            : ugreedyA(problem, gs, matrix, inst, {16, 4});
    REQUIRE(res.perm.size() == gs.size());
    CHECK_NOTHROW(check_permutation(inst, res.perm));
    // the assembled route passes through all guards
    auto s = dets_sensing_policy(res.route.polyline, gs.guards);
    REQUIRE(static_cast<int>(s.configs.size()) == gs.size());
  }
}

TEST_CASE("unit node budget reduces the lookahead to the single-step greedy") {
  std::mt19937_64 rng(23);
  auto env = testsupport::random_map(rng, 4);
  auto problem = testsupport::make_problem(env, {2.0, 2.0}, 8.0);
  problem.epsilon = 1e-3;
  auto gs = place_guards(problem, PlacementMethod::IRS, 31);
  auto matrix = shortest_path_matrix(problem.env, gs.guards);
  auto inst = build_instance(matrix, problem.time_model);

  auto one = ugreedy1(problem, gs, matrix, inst);
  auto look = ugreedyA(problem, gs, matrix, inst, {1, 4});
  REQUIRE(look.perm.order == one.perm.order);
}

TEST_CASE("determinism and the timeout flag") {
  std::mt19937_64 rng(29);
  auto env = testsupport::random_map(rng, 3);
  auto problem = testsupport::make_problem(env, {1.0, 1.0}, 9.0);
  problem.epsilon = 1e-3;
  auto gs = place_guards(problem, PlacementMethod::IRS, 37);
  auto matrix = shortest_path_matrix(problem.env, gs.guards);
  auto inst = build_instance(matrix, problem.time_model);

  auto a = ugreedy1(problem, gs, matrix, inst);
  auto b = ugreedy1(problem, gs, matrix, inst);
  REQUIRE(a.perm.order == b.perm.order);

  // zero budget: everything beyond the first instant counts as a timeout
  auto c = ugreedyA(problem, gs, matrix, inst, {16, 4}, 0.0);
  REQUIRE(c.timeout);
  REQUIRE(c.perm.size() == gs.size());
}
