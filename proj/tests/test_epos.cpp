#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <swarmsense/epos.hpp>

#include "helpers.hpp"

using namespace swarmsense;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PlanSet make_set(int agent_id, const std::vector<std::vector<double>>& vectors,
                 std::vector<double> costs = {}) {
  PlanSet set;
  set.agent_id = agent_id;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Plan plan;
    plan.hover = vectors[i];
    if (!costs.empty()) {
      plan.cost = costs[i];
    } else {
      plan.cost = std::accumulate(vectors[i].begin(), vectors[i].end(), 0.0);
    }
    set.plans.push_back(std::move(plan));
  }
  return set;
}

// Two agents, two plans each; exactly one combination matches the target.
struct ExactCover {
  std::vector<PlanSet> sets = {
      make_set(0, {{13, 0, 0, 13}, {0, 13, 13, 0}}),
      make_set(1, {{0, 13, 0, 13}, {13, 0, 13, 0}})};
  std::vector<double> target = {26, 0, 13, 13};
};

// Three agents by three plans over four cells. The optimum (1, 1, 2) is
// separated from the runner-up by a comfortable margin.
struct SmallInstance {
  std::vector<PlanSet> sets = {
      make_set(0, {{0, 26, 26, 0}, {13, 26, 13, 26}, {26, 0, 26, 0}}),
      make_set(1, {{13, 13, 26, 0}, {0, 26, 13, 26}, {26, 13, 13, 26}}),
      make_set(2, {{0, 0, 26, 0}, {26, 13, 26, 0}, {26, 0, 0, 26}})};
  std::vector<double> target = {15, 48, 13, 44};
  std::vector<int> optimum = {1, 1, 2};
  double optimum_cost = 0.07953711742615381;
  double runner_up_cost = 0.08606510313679233;
};

std::vector<PlanSet> random_instance(Rng& rng, int agents, int plans, int cells) {
  std::vector<PlanSet> sets;
  for (int a = 0; a < agents; ++a) {
    std::vector<std::vector<double>> vectors;
    std::vector<double> costs;
    for (int p = 0; p < plans; ++p) {
      std::vector<double> v(cells);
      for (double& x : v) x = 13.0 * static_cast<double>(rng.below(3));
      vectors.push_back(std::move(v));
      costs.push_back(100.0 + rng.unit() * 900.0);
    }
    sets.push_back(make_set(a, vectors, costs));
  }
  return sets;
}

std::vector<double> random_target(Rng& rng, int cells) {
  std::vector<double> target(cells);
  for (double& x : target) x = 13.0 * static_cast<double>(1 + rng.below(5));
  return target;
}

}  // namespace

TEST_CASE("tree layout places every agent once") {
  TreeTopology tree = build_tree(10, 1);
  REQUIRE(tree.node_agent.size() == 10);
  auto sorted = tree.node_agent;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> iota(10);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);

  CHECK(tree.parent_position(0) == -1);
  CHECK(tree.parent_position(1) == 0);
  CHECK(tree.parent_position(2) == 0);
  CHECK(tree.parent_position(5) == 2);
  CHECK(tree.parent_position(9) == 4);
  CHECK(tree.has_position(9));
  CHECK_FALSE(tree.has_position(10));
  CHECK_FALSE(tree.has_position(-1));

  CHECK(build_tree(10, 1).node_agent == tree.node_agent);
  bool any_differs = false;
  for (std::uint64_t s = 2; s <= 5; ++s)
    any_differs |= build_tree(10, s).node_agent != tree.node_agent;
  CHECK(any_differs);
  CHECK_THROWS_AS(build_tree(0, 1), ConfigError);
}

TEST_CASE("unit scaling and the mismatch measure") {
  auto u = unit_scale({3, 4});
  CHECK_THAT(u[0], WithinRel(0.6, 1e-12));
  CHECK_THAT(u[1], WithinRel(0.8, 1e-12));
  CHECK_THROWS_AS(unit_scale({0, 0, 0}), NumericError);

  std::vector<double> a = {13, 0, 26, 13};
  std::vector<double> b = {5, 30, 2, 44};
  CHECK(rss(a, a) == 0.0);
  CHECK(rss(a, b) == rss(b, a));
  CHECK_THROWS_AS(rss(a, {1, 2}), NumericError);

  // rss equals twice one minus the cosine similarity
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double expected = 2.0 * (1.0 - dot / std::sqrt(na * nb));
  CHECK_THAT(rss(a, b), WithinRel(expected, 1e-12));

  // scale invariance; powers of two leave the value bit-identical
  std::vector<double> a2 = a;
  for (double& x : a2) x *= 2.0;
  CHECK(rss(a2, b) == rss(a, b));
  std::vector<double> a3 = a;
  for (double& x : a3) x *= 3.0;
  CHECK_THAT(rss(a3, b), WithinRel(rss(a, b), 1e-12));
}

TEST_CASE("plan costs normalize to the unit interval per agent") {
  PlanSet set = make_set(0, {{1, 0}, {0, 1}, {1, 1}}, {10, 20, 30});
  CHECK(normalized_costs(set) == std::vector<double>{0.0, 0.5, 1.0});

  PlanSet flat = make_set(0, {{1, 0}, {0, 1}}, {7, 7});
  CHECK(normalized_costs(flat) == std::vector<double>{0.0, 0.0});

  PlanSet empty;
  CHECK_THROWS_AS(normalized_costs(empty), ConfigError);
}

TEST_CASE("score blends mismatch with normalized local cost") {
  PlanSet set = make_set(0, {{1, 0}, {0, 1}}, {10, 20});
  std::vector<double> target = {1, 0};
  CHECK(score({1, 0}, 0, target, 0.0, set) == 0.0);
  CHECK(score({1, 0}, 1, target, 1.0, set) == 1.0);  // pure local cost
  CHECK_THROWS_AS(score({1, 0}, 2, target, 0.0, set), ConfigError);
  CHECK_THROWS_AS(score({1, 0}, 0, target, 1.5, set), ConfigError);
}

TEST_CASE("aggregate response sums the chosen vectors") {
  ExactCover ec;
  CHECK(aggregate_response(ec.sets, {0, 1}) ==
        std::vector<double>{26, 0, 13, 13});
  CHECK(aggregate_response(ec.sets, {1, 0}) ==
        std::vector<double>{0, 26, 13, 13});
  CHECK_THROWS_AS(aggregate_response(ec.sets, {0}), ConfigError);
  CHECK_THROWS_AS(aggregate_response({}, {}), ConfigError);
}

TEST_CASE("global objective on the frozen small instance") {
  SmallInstance si;
  CHECK_THAT(global_objective(si.sets, si.optimum, si.target, 0.0),
             WithinRel(si.optimum_cost, 1e-12));
}

TEST_CASE("exhaustive search finds the frozen optimum") {
  SmallInstance si;
  Selection best = brute_force_select(si.sets, si.target, 0.0);
  CHECK(best.plan_index == si.optimum);
  CHECK_THAT(best.global_cost, WithinRel(si.optimum_cost, 1e-12));

  // second-best sanity: every other combination costs at least the runner-up
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        std::vector<int> combo = {i, j, k};
        if (combo == si.optimum) continue;
        CHECK(global_objective(si.sets, combo, si.target, 0.0) >=
              si.runner_up_cost - 1e-12);
      }
}

TEST_CASE("exhaustive search breaks ties lexicographically") {
  std::vector<PlanSet> sets = {make_set(0, {{1, 1}, {1, 1}}),
                               make_set(1, {{2, 2}, {2, 2}})};
  Selection best = brute_force_select(sets, {1, 1}, 0.0);
  CHECK(best.plan_index == std::vector<int>{0, 0});
}

TEST_CASE("exhaustive search refuses oversized instances") {
  std::vector<PlanSet> sets;
  for (int a = 0; a < 21; ++a) sets.push_back(make_set(a, {{1, 0}, {0, 1}}));
  CHECK_THROWS_AS(brute_force_select(sets, {1, 1}, 0.0), NumericError);
}

TEST_CASE("coordinated selection solves the exact-cover instance") {
  ExactCover ec;
  for (std::uint64_t seed : {1, 2, 3}) {
    TreeTopology tree = build_tree(2, seed);
    EposConfig cfg;
    cfg.iterations = 10;
    Selection sel = run_epos(ec.sets, ec.target, tree, cfg);
    CHECK(sel.plan_index == std::vector<int>{0, 1});
    CHECK(sel.global_cost == 0.0);
    CHECK(sel.global_response == ec.target);
  }
}

TEST_CASE("coordinated selection matches the exhaustive optimum") {
  SmallInstance si;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    TreeTopology tree = build_tree(3, seed);
    EposConfig cfg;
    cfg.iterations = 40;
    Selection sel = run_epos(si.sets, si.target, tree, cfg);
    CHECK(sel.plan_index == si.optimum);
    CHECK_THAT(sel.global_cost, WithinRel(si.optimum_cost, 1e-12));
  }
}

TEST_CASE("accepted cost never increases between rounds") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto sets = random_instance(rng, 5, 4, 6);
    auto target = random_target(rng, 6);
    TreeTopology tree = build_tree(5, rng.next());
    EposConfig cfg;
    Selection sel = run_epos(sets, target, tree, cfg);
    REQUIRE(sel.cost_trace.size() == 40);
    for (std::size_t i = 1; i < sel.cost_trace.size(); ++i)
      CHECK(sel.cost_trace[i] <= sel.cost_trace[i - 1]);
    CHECK(sel.global_cost == sel.cost_trace.back());
  }
}

TEST_CASE("per-round tree aggregation is exact") {
  Rng rng(23);
  auto sets = random_instance(rng, 7, 4, 6);
  auto target = random_target(rng, 6);
  TreeTopology tree = build_tree(7, 11);
  EposConfig cfg;
  EposAudit audit;
  run_epos(sets, target, tree, cfg, &audit);
  REQUIRE(audit.rounds.size() == 40);
  for (const auto& round : audit.rounds) {
    CHECK(round.root_aggregate == round.flat_sum);
    if (round.accepted) CHECK(round.accepted_cost == round.candidate_cost);
  }
}

TEST_CASE("the beta one endpoint collapses to the greedy baseline") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    auto sets = random_instance(rng, 5, 4, 6);
    auto target = random_target(rng, 6);
    TreeTopology tree = build_tree(5, rng.next());
    EposConfig cfg;
    cfg.beta = 1.0;
    Selection coordinated = run_epos(sets, target, tree, cfg);
    Selection greedy = greedy_select(sets);
    CHECK(coordinated.plan_index == greedy.plan_index);
    CHECK(coordinated.global_cost == greedy.global_cost);
  }
}

TEST_CASE("selection is invariant under target rescaling") {
  Rng rng(37);
  for (double lambda : {0.1, 7.0, 1000.0}) {
    auto sets = random_instance(rng, 5, 4, 6);
    auto target = random_target(rng, 6);
    TreeTopology tree = build_tree(5, rng.next());
    EposConfig cfg;
    Selection base = run_epos(sets, target, tree, cfg);
    auto scaled = target;
    for (double& x : scaled) x *= lambda;
    Selection same = run_epos(sets, scaled, tree, cfg);
    CHECK(same.plan_index == base.plan_index);
    CHECK(same.global_response == base.global_response);
  }
}

TEST_CASE("greedy takes the cheapest plan, ties to the lower index") {
  std::vector<PlanSet> sets = {make_set(0, {{1, 0}, {0, 1}, {1, 1}}, {5, 3, 9}),
                               make_set(1, {{1, 0}, {0, 1}}, {3, 3})};
  Selection sel = greedy_select(sets);
  CHECK(sel.plan_index == std::vector<int>{1, 0});
  CHECK(sel.cost_trace.size() == 1);
  CHECK_THROWS_AS(greedy_select({}), ConfigError);
}

TEST_CASE("instance validation rejects malformed input") {
  ExactCover ec;
  TreeTopology tree = build_tree(2, 1);
  EposConfig cfg;

  EposConfig bad_beta = cfg;
  bad_beta.beta = 1.5;
  CHECK_THROWS_AS(run_epos(ec.sets, ec.target, tree, bad_beta), ConfigError);

  EposConfig no_rounds = cfg;
  no_rounds.iterations = 0;
  CHECK_THROWS_AS(run_epos(ec.sets, ec.target, tree, no_rounds), ConfigError);

  CHECK_THROWS_AS(run_epos(ec.sets, {1, 2}, tree, cfg), ConfigError);
  CHECK_THROWS_AS(run_epos(ec.sets, {0, 0, 0, 0}, tree, cfg), NumericError);

  TreeTopology wrong = build_tree(3, 1);
  CHECK_THROWS_AS(run_epos(ec.sets, ec.target, wrong, cfg), ConfigError);

  std::vector<PlanSet> with_empty = ec.sets;
  with_empty[1].plans.clear();
  CHECK_THROWS_AS(run_epos(with_empty, ec.target, tree, cfg), ConfigError);

  // an all-zero target is fine when the objective ignores it
  EposConfig local_only = cfg;
  local_only.beta = 1.0;
  CHECK_NOTHROW(run_epos(ec.sets, {0, 0, 0, 0}, tree, local_only));
}
