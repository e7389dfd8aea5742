#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "swarmsense/errors.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/rng.hpp"

namespace swarmsense {

// Communication overlay for coordinated selection: a balanced binary tree in
// heap layout. Position 0 is the root, position p has children 2p+1 and 2p+2,
// every node is occupied by one agent. node_agent maps tree position to the
// index of the agent occupying it.
struct TreeTopology {
  int agent_count = 0;
  std::vector<int> node_agent;

  int parent_position(int pos) const { return pos == 0 ? -1 : (pos - 1) / 2; }
  bool has_position(int pos) const { return pos >= 0 && pos < agent_count; }
};

// Agents are shuffled onto tree positions with a seeded permutation.
inline TreeTopology build_tree(int agent_count, std::uint64_t seed) {
  if (agent_count < 1) throw ConfigError("tree topology needs at least one agent");
  TreeTopology tree;
  tree.agent_count = agent_count;
  tree.node_agent.resize(agent_count);
  std::iota(tree.node_agent.begin(), tree.node_agent.end(), 0);
  Rng rng = Rng::stream(seed, rng_domain::kTree);
  rng.shuffle(tree.node_agent);
  return tree;
}

struct EposConfig {
  int iterations = 40;
  double beta = 0.0;  // 0 = pure mismatch minimization, 1 = pure local cost
  std::uint64_t seed = 0;
};

struct Selection {
  std::vector<int> plan_index;          // chosen plan per agent
  std::vector<double> global_response;  // per-cell sum of chosen hover vectors
  double global_cost = 0.0;
  std::vector<double> cost_trace;       // accepted objective per round
};

// Per-round internals recorded for auditing, see run_epos.
struct EposAudit {
  struct Round {
    bool accepted = false;
    double candidate_cost = 0.0;
    double accepted_cost = 0.0;
    std::vector<double> root_aggregate;  // bottom-up sum at the root
    std::vector<double> flat_sum;        // direct sum of the candidate choices
  };
  std::vector<Round> rounds;
};

inline std::vector<double> unit_scale(const std::vector<double>& v) {
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  if (!(norm_sq > 0.0)) throw NumericError("cannot unit-scale a zero vector");
  double inv = 1.0 / std::sqrt(norm_sq);
  std::vector<double> out(v);
  for (double& x : out) x *= inv;
  return out;
}

// Residual sum of squares between the unit-length-scaled signals. Scale
// invariant in both arguments; equals 2 (1 - cosine similarity).
inline double rss(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw NumericError("signal length mismatch");
  std::vector<double> ua = unit_scale(a);
  std::vector<double> ub = unit_scale(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    double d = ua[i] - ub[i];
    sum += d * d;
  }
  return sum;
}

// Min-max normalized plan costs within one agent's own set; all zero when
// every plan costs the same.
inline std::vector<double> normalized_costs(const PlanSet& set) {
  if (set.plans.empty()) throw ConfigError("agent has an empty plan set");
  double lo = set.plans.front().cost;
  double hi = lo;
  for (const Plan& p : set.plans) {
    lo = std::min(lo, p.cost);
    hi = std::max(hi, p.cost);
  }
  std::vector<double> out;
  out.reserve(set.plans.size());
  for (const Plan& p : set.plans)
    out.push_back(hi > lo ? (p.cost - lo) / (hi - lo) : 0.0);
  return out;
}

// What one agent minimizes: mismatch of the would-be global response blended
// with its own normalized plan cost.
inline double score(const std::vector<double>& candidate_global, int plan_index,
                    const std::vector<double>& target, double beta,
                    const PlanSet& set) {
  if (beta < 0.0 || beta > 1.0) throw ConfigError("beta must lie in [0, 1]");
  if (plan_index < 0 || plan_index >= static_cast<int>(set.plans.size()))
    throw ConfigError("plan index out of range");
  double local = normalized_costs(set)[plan_index];
  if (beta >= 1.0) return local;
  return (1.0 - beta) * rss(candidate_global, target) + beta * local;
}

inline std::vector<double> aggregate_response(const std::vector<PlanSet>& plan_sets,
                                              const std::vector<int>& choice) {
  if (plan_sets.empty()) throw ConfigError("no plan sets");
  if (choice.size() != plan_sets.size())
    throw ConfigError("one chosen plan per agent expected");
  if (plan_sets.front().plans.empty()) throw ConfigError("agent has an empty plan set");
  std::size_t cells = plan_sets.front().plans.front().hover.size();
  std::vector<double> sum(cells, 0.0);
  for (std::size_t a = 0; a < plan_sets.size(); ++a) {
    const auto& vec = plan_sensing_vector(plan_sets[a].plans.at(choice[a]));
    if (vec.size() != cells) throw ConfigError("plan vectors differ in length");
    for (std::size_t i = 0; i < cells; ++i) sum[i] += vec[i];
  }
  return sum;
}

// The objective a whole selection is judged by: (1-beta) times the mismatch
// of the aggregate against the target plus beta times the mean normalized
// local cost.
inline double global_objective(const std::vector<PlanSet>& plan_sets,
                               const std::vector<int>& choice,
                               const std::vector<double>& target, double beta) {
  double local = 0.0;
  for (std::size_t a = 0; a < plan_sets.size(); ++a)
    local += normalized_costs(plan_sets[a])[choice.at(a)];
  local /= static_cast<double>(plan_sets.size());
  if (beta >= 1.0) return local;
  return (1.0 - beta) * rss(aggregate_response(plan_sets, choice), target) +
         beta * local;
}

namespace detail {

inline void validate_instance(const std::vector<PlanSet>& plan_sets,
                              const std::vector<double>& target, double beta) {
  if (beta < 0.0 || beta > 1.0) throw ConfigError("beta must lie in [0, 1]");
  if (plan_sets.empty()) throw ConfigError("no plan sets");
  for (const PlanSet& set : plan_sets) {
    if (set.plans.empty())
      throw ConfigError("agent " + std::to_string(set.agent_id) +
                        " has an empty plan set");
    for (const Plan& p : set.plans)
      if (p.hover.size() != target.size())
        throw ConfigError("plan vector length does not match the target");
  }
  if (beta < 1.0) {
    double norm_sq = 0.0;
    for (double x : target) norm_sq += x * x;
    if (!(norm_sq > 0.0))
      throw NumericError("target must be nonzero when beta < 1");
  }
}

}  // namespace detail

// Iterative coordinated selection over the tree.
//
// Each round runs bottom-up over the tree (children strictly before parents):
// an agent takes as fixed context what the rest of the swarm chose in the
// last accepted round (previous global response minus its own previous
// subtree aggregate; zero in the first round), adds its children's fresh
// subtree aggregates, and picks the plan whose addition scores best. Its new
// subtree aggregate (children plus own choice) travels up; the root's
// aggregate is the candidate global response. Top-down, the candidate is
// accepted only if its global objective does not worsen; otherwise the whole
// round reverts to the previous selections, which keeps the accepted cost
// monotonically non-increasing.
inline Selection run_epos(const std::vector<PlanSet>& plan_sets,
                          const std::vector<double>& target,
                          const TreeTopology& tree, const EposConfig& cfg,
                          EposAudit* audit = nullptr) {
  detail::validate_instance(plan_sets, target, cfg.beta);
  if (cfg.iterations < 1) throw ConfigError("iterations must be at least 1");
  const int agents = static_cast<int>(plan_sets.size());
  if (tree.agent_count != agents ||
      static_cast<int>(tree.node_agent.size()) != agents)
    throw ConfigError("tree topology does not cover the agents");
  const std::size_t cells = target.size();
  const double beta = cfg.beta;

  std::vector<std::vector<double>> norm_local(agents);
  for (int a = 0; a < agents; ++a) norm_local[a] = normalized_costs(plan_sets[a]);

  std::vector<int> chosen(agents, 0);
  std::vector<std::vector<double>> subtree_prev(agents);
  std::vector<double> global_prev;
  double cost_prev = std::numeric_limits<double>::infinity();
  bool have_accepted = false;
  std::vector<double> trace;
  trace.reserve(cfg.iterations);

  std::vector<double> candidate(cells);
  for (int round = 0; round < cfg.iterations; ++round) {
    std::vector<std::vector<double>> subtree_new(agents);
    std::vector<int> next = chosen;
    for (int pos = agents - 1; pos >= 0; --pos) {
      int agent = tree.node_agent[pos];
      const PlanSet& set = plan_sets[agent];

      std::vector<double> base(cells, 0.0);  // context + children aggregates
      if (have_accepted)
        for (std::size_t i = 0; i < cells; ++i)
          base[i] = global_prev[i] - subtree_prev[pos][i];
      std::vector<double> child_sum(cells, 0.0);
      for (int c : {2 * pos + 1, 2 * pos + 2})
        if (c < agents)
          for (std::size_t i = 0; i < cells; ++i) child_sum[i] += subtree_new[c][i];
      for (std::size_t i = 0; i < cells; ++i) base[i] += child_sum[i];

      int best = 0;
      double best_score = std::numeric_limits<double>::infinity();
      for (int j = 0; j < static_cast<int>(set.plans.size()); ++j) {
        double s;
        if (beta >= 1.0) {
          s = norm_local[agent][j];
        } else {
          const auto& vec = plan_sensing_vector(set.plans[j]);
          for (std::size_t i = 0; i < cells; ++i) candidate[i] = base[i] + vec[i];
          s = (1.0 - beta) * rss(candidate, target) + beta * norm_local[agent][j];
        }
        if (s < best_score) {  // strict: ties go to the lowest plan index
          best_score = s;
          best = j;
        }
      }
      next[agent] = best;
      subtree_new[pos].assign(cells, 0.0);
      const auto& vec = plan_sensing_vector(set.plans[best]);
      for (std::size_t i = 0; i < cells; ++i)
        subtree_new[pos][i] = child_sum[i] + vec[i];
    }

    double cost_new = global_objective(plan_sets, next, target, beta);
    bool accept = !(cost_new > cost_prev);
    if (accept) {
      chosen = next;
      subtree_prev = subtree_new;
      global_prev = aggregate_response(plan_sets, chosen);
      cost_prev = cost_new;
      have_accepted = true;
    }
    trace.push_back(cost_prev);
    if (audit) {
      EposAudit::Round rec;
      rec.accepted = accept;
      rec.candidate_cost = cost_new;
      rec.accepted_cost = cost_prev;
      rec.root_aggregate = subtree_new[0];
      rec.flat_sum = aggregate_response(plan_sets, next);
      audit->rounds.push_back(std::move(rec));
    }
  }

  Selection sel;
  sel.plan_index = chosen;
  sel.global_response = aggregate_response(plan_sets, chosen);
  sel.global_cost = cost_prev;
  sel.cost_trace = std::move(trace);
  return sel;
}

// Uncoordinated baseline: every agent takes its cheapest plan (ties to the
// lowest index). Equivalent to the beta = 1 endpoint of run_epos.
inline Selection greedy_select(const std::vector<PlanSet>& plan_sets) {
  if (plan_sets.empty()) throw ConfigError("no plan sets");
  Selection sel;
  sel.plan_index.reserve(plan_sets.size());
  for (const PlanSet& set : plan_sets) {
    if (set.plans.empty())
      throw ConfigError("agent " + std::to_string(set.agent_id) +
                        " has an empty plan set");
    int best = 0;
    for (int j = 1; j < static_cast<int>(set.plans.size()); ++j)
      if (set.plans[j].cost < set.plans[best].cost) best = j;
    sel.plan_index.push_back(best);
  }
  sel.global_response = aggregate_response(plan_sets, sel.plan_index);
  double local = 0.0;
  for (std::size_t a = 0; a < plan_sets.size(); ++a)
    local += normalized_costs(plan_sets[a])[sel.plan_index[a]];
  sel.global_cost = local / static_cast<double>(plan_sets.size());
  sel.cost_trace = {sel.global_cost};
  return sel;
}

// Exhaustive optimum of the global objective; the test oracle. Guarded: the
// combination count must stay at or below one million. Ties break to the
// lexicographically smallest index tuple.
inline Selection brute_force_select(const std::vector<PlanSet>& plan_sets,
                                    const std::vector<double>& target, double beta) {
  detail::validate_instance(plan_sets, target, beta);
  const int agents = static_cast<int>(plan_sets.size());
  double combos = 1.0;
  for (const PlanSet& set : plan_sets) combos *= static_cast<double>(set.plans.size());
  if (combos > 1e6)
    throw NumericError("instance too large for exhaustive search (" +
                       std::to_string(combos) + " combinations)");

  std::vector<int> choice(agents, 0);
  std::vector<int> best_choice = choice;
  double best_cost = std::numeric_limits<double>::infinity();
  while (true) {
    double cost = global_objective(plan_sets, choice, target, beta);
    if (cost < best_cost) {  // strict: first hit is lexicographically smallest
      best_cost = cost;
      best_choice = choice;
    }
    int a = agents - 1;  // odometer, last agent fastest = lexicographic order
    while (a >= 0) {
      if (++choice[a] < static_cast<int>(plan_sets[a].plans.size())) break;
      choice[a] = 0;
      --a;
    }
    if (a < 0) break;
  }

  Selection sel;
  sel.plan_index = best_choice;
  sel.global_response = aggregate_response(plan_sets, best_choice);
  sel.global_cost = best_cost;
  sel.cost_trace = {best_cost};
  return sel;
}

}  // namespace swarmsense
