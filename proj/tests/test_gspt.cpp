#include <catch2/catch_amalgamated.hpp>

#include "milaps/gspt.hpp"
#include "support.hpp"

using namespace milaps;

TEST_CASE("instance from a straight-line guard chain") {
  auto env = testsupport::unit_square();
  std::vector<Point> guards{{0.1, 0.5}, {0.5, 0.5}, {0.9, 0.5}};
  auto m = shortest_path_matrix(env, guards);
  TravelTimeModel tm{1.0, 0.5};
  auto inst = build_instance(m, tm);
  REQUIRE(inst.size() == 3);
  REQUIRE(inst.symmetric());
  // straight through the middle: no turning
  REQUIRE(inst.turn_cost(0, 1, 2) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(inst.travel(0, 1) == Catch::Approx(0.4));
  REQUIRE(inst.travel(0, 2) == Catch::Approx(0.8));
}

TEST_CASE("right-angle turn costs t_ang times pi/2") {
  auto env = testsupport::unit_square();
  std::vector<Point> guards{{0.1, 0.1}, {0.5, 0.1}, {0.5, 0.5}};
  auto m = shortest_path_matrix(env, guards);
  auto inst = build_instance(m, TravelTimeModel{1.0, 0.5});
  REQUIRE(inst.turn_cost(0, 1, 2) == Catch::Approx(0.5 * kPi / 2));
  // symmetric in reversal
  REQUIRE(inst.turn_cost(2, 1, 0) == Catch::Approx(inst.turn_cost(0, 1, 2)));
}

TEST_CASE("zero turn rate flags the plain graph search reduction") {
  auto env = testsupport::unit_square();
  std::vector<Point> guards{{0.1, 0.1}, {0.5, 0.1}, {0.5, 0.5}};
  auto m = shortest_path_matrix(env, guards);
  auto inst = build_instance(m, TravelTimeModel{1.0, 0.0});
  REQUIRE(inst.gsp());
  REQUIRE(inst.tdp());  // uniform unit weights
  inst.set_weights({1.0, 2.0, 3.0});
  REQUIRE(inst.gsp());
  REQUIRE_FALSE(inst.tdp());
}

TEST_CASE("start heading defines the start costs") {
  auto env = testsupport::unit_square();
  std::vector<Point> guards{{0.5, 0.5}, {0.9, 0.5}, {0.5, 0.9}};
  auto m = shortest_path_matrix(env, guards);
  // facing east: reaching guard 1 needs no initial turn, guard 2 a quarter turn
  auto inst = build_instance(m, TravelTimeModel{1.0, 2.0}, 0.0);
  REQUIRE(inst.start_cost(1) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(inst.start_cost(2) == Catch::Approx(2.0 * kPi / 2));
  REQUIRE_FALSE(inst.gsp());
  // no heading: no start costs
  auto inst2 = build_instance(m, TravelTimeModel{1.0, 2.0});
  REQUIRE(inst2.start_cost(1) == 0.0);
  REQUIRE(inst2.start_cost(2) == 0.0);
}

TEST_CASE("objective on tiny instances") {
  // single vertex: empty sum
  {
    std::vector<double> w{1.0}, sc{0.0}, d{0.0};
    GsptInstance inst(w, sc, d, d, d, 0.0);
    Permutation p{{0}};
    REQUIRE(objective(inst, p) == 0.0);
  }
  // three-vertex line, unit weights: 2*1 + 5*1 = 7
  {
    std::vector<double> w{1.0, 1.0, 1.0}, sc{0.0, 0.0, 0.0};
    std::vector<double> d{0, 2, 9, 2, 0, 3, 9, 3, 0};
    std::vector<double> dirs(9, 0.0);
    GsptInstance inst(w, sc, d, dirs, dirs, 0.0);
    Permutation p{{0, 1, 2}};
    REQUIRE(objective(inst, p) == Catch::Approx(7.0));
  }
}

TEST_CASE("objective equals the independent oracle on random instances") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = testsupport::random_instance(rng, 7);
    auto p = testsupport::random_permutation(inst, rng);
    REQUIRE(objective(inst, p) ==
            Catch::Approx(testsupport::oracle_objective(inst, p)).epsilon(1e-12));
    // deterministic re-evaluation
    REQUIRE(objective(inst, p) == objective(inst, p));
  }
}

TEST_CASE("geometric instances are exactly symmetric") {
  std::mt19937_64 rng(73);
  auto env = testsupport::random_map(rng, 4);
  Region reg = to_region(env);
  std::vector<Point> guards;
  for (int k = 0; k < 8; ++k) guards.push_back(sample_point_in_region(reg, rng));
  auto m = shortest_path_matrix(env, guards);
  auto inst = build_instance(m, TravelTimeModel{1.0, 0.7});
  REQUIRE(inst.symmetric());
  std::uniform_int_distribution<int> uv(0, 7);
  for (int k = 0; k < 1000; ++k) {
    int h = uv(rng), u = uv(rng), v = uv(rng);
    REQUIRE(inst.travel(u, v) == inst.travel(v, u));
    REQUIRE(inst.turn_cost(h, u, v) == Catch::Approx(inst.turn_cost(v, u, h)).margin(1e-12));
  }
}

TEST_CASE("delivery-problem reduction evaluates as a plain latency sum") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 100; ++trial) {
    testsupport::InstanceOptions opt;
    opt.with_turns = false;
    opt.with_start_costs = false;
    opt.constant_weights = true;
    auto inst = testsupport::random_instance(rng, 4 + static_cast<int>(rng() % 6), opt);
    REQUIRE(inst.gsp());
    REQUIRE(inst.tdp());
    auto p = testsupport::random_permutation(inst, rng);
    REQUIRE(objective(inst, p) ==
            Catch::Approx(testsupport::oracle_tdp_latency_sum(inst, p)).epsilon(1e-12));
  }
}

TEST_CASE("induced sub-instance preserves costs under the index mapping") {
  std::mt19937_64 rng(83);
  auto inst = testsupport::random_instance(rng, 9);
  std::vector<int> keep{1, 3, 4, 6, 8};
  auto sub = inst.induced(keep, 4);
  REQUIRE(sub.size() == 5);
  REQUIRE(sub.start() == 2);  // position of old index 4
  for (std::size_t a = 0; a < keep.size(); ++a) {
    REQUIRE(sub.weight(a) == inst.weight(keep[a]));
    for (std::size_t b = 0; b < keep.size(); ++b) {
      REQUIRE(sub.travel(a, b) == inst.travel(keep[a], keep[b]));
      for (std::size_t c = 0; c < keep.size(); ++c) {
        REQUIRE(sub.turn_cost(a, b, c) ==
                Catch::Approx(inst.turn_cost(keep[a], keep[b], keep[c])).margin(1e-12));
      }
    }
  }
}

TEST_CASE("permutation validation") {
  std::mt19937_64 rng(89);
  auto inst = testsupport::random_instance(rng, 5);
  CHECK_THROWS_AS(check_permutation(inst, Permutation{{1, 0, 2, 3, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(check_permutation(inst, Permutation{{0, 1, 2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(check_permutation(inst, Permutation{{0, 1, 1, 3, 4}}), std::invalid_argument);
  CHECK_NOTHROW(check_permutation(inst, Permutation{{0, 4, 2, 3, 1}}));
}
