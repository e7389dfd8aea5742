#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "swarmsense/energy.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/rng.hpp"
#include "swarmsense/sensing_map.hpp"

namespace swarmsense {

struct PlannerConfig {
  int plans_per_agent = 16;
  int retry_budget = 1000;  // resamples tolerated per plan, and duplicate
                            // rejections tolerated per plan set
  double hover_duration_s = 13.0;
  int min_route_cells = 5;
  int max_route_cells = 6;
};

inline std::vector<int> eligible_cells(const Requirements& req) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(req.values.size()); ++i)
    if (req.values[i] > 0.0) out.push_back(i);
  return out;
}

// Order the drawn cells nearest-neighbour from the departure cell (ties to
// the lower cell index). The drawn order is kept when it already gives the
// shorter closed tour, so ordering can only shorten the route.
inline std::vector<int> order_route(const SensingMap& map, const std::vector<int>& drawn) {
  std::vector<int> remaining = drawn;
  std::vector<int> route;
  route.reserve(drawn.size());
  int current = map.departure_cell;
  while (!remaining.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      double di = distance(map, current, remaining[i]);
      double db = distance(map, current, remaining[best]);
      if (di < db || (di == db && remaining[i] < remaining[best])) best = i;
    }
    current = remaining[best];
    route.push_back(current);
    remaining.erase(remaining.begin() + best);
  }
  if (route_length(map, drawn) < route_length(map, route)) return drawn;
  return route;
}

// Sample one battery-feasible plan: route size drawn uniformly from
// [min_route_cells, max_route_cells], cells drawn uniformly without
// replacement from the positive-requirement set, then ordered. Infeasible
// samples are rejected and redrawn.
inline Plan generate_plan(const SensingMap& map, const Requirements& req,
                          const EnergyModel& model, const DroneSpec& spec, Rng& rng,
                          const PlannerConfig& cfg = {}) {
  std::vector<int> pool = eligible_cells(req);
  if (static_cast<int>(pool.size()) < cfg.min_route_cells)
    throw GenerationError("only " + std::to_string(pool.size()) +
                          " cells have positive requirements; routes need at least " +
                          std::to_string(cfg.min_route_cells));
  for (int attempt = 0; attempt < cfg.retry_budget; ++attempt) {
    int span = cfg.max_route_cells - cfg.min_route_cells + 1;
    int k = cfg.min_route_cells + static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
    k = std::min<int>(k, static_cast<int>(pool.size()));

    std::vector<int> draw = pool;  // partial Fisher-Yates keeps the drawn order
    for (int i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(draw.size() - i));
      std::swap(draw[i], draw[j]);
    }
    draw.resize(k);

    Plan plan;
    plan.route = order_route(map, draw);
    plan.hover.assign(map.cell_count(), 0.0);
    for (int cell : plan.route) plan.hover[cell] = cfg.hover_duration_s;
    EnergyEstimate e = plan_energy(plan, model, map, spec);
    plan.cost = e.total_energy_j;
    plan.total_time = e.hover_time_s + e.travel_time_s;
    if (plan.total_time <= spec.max_flight_time_s &&
        e.total_energy_j <= usable_battery_energy(spec))
      return plan;
  }
  throw GenerationError("no battery-feasible plan found in " +
                        std::to_string(cfg.retry_budget) + " attempts");
}

// The whole candidate set of one agent: pairwise-distinct routes, each
// feasible. The rng substream is derived from (seed, agent_id), so agents can
// be generated in any order, or concurrently, with identical results.
inline PlanSet generate_plan_set(int agent_id, const SensingMap& map,
                                 const Requirements& req, const EnergyModel& model,
                                 const DroneSpec& spec, std::uint64_t seed,
                                 const PlannerConfig& cfg = {}) {
  if (cfg.plans_per_agent < 1)
    throw GenerationError("plan set size must be at least 1");
  Rng rng = Rng::stream(seed, rng_domain::kPlans, static_cast<std::uint64_t>(agent_id));
  PlanSet set;
  set.agent_id = agent_id;
  int duplicates = 0;
  while (static_cast<int>(set.plans.size()) < cfg.plans_per_agent) {
    Plan plan = generate_plan(map, req, model, spec, rng, cfg);
    bool seen = std::any_of(set.plans.begin(), set.plans.end(),
                            [&](const Plan& p) { return p.route == plan.route; });
    if (seen) {
      if (++duplicates > cfg.retry_budget)
        throw GenerationError("agent " + std::to_string(agent_id) +
                              ": could not assemble " +
                              std::to_string(cfg.plans_per_agent) +
                              " distinct feasible plans");
      continue;
    }
    set.plans.push_back(std::move(plan));
  }
  return set;
}

}  // namespace swarmsense
