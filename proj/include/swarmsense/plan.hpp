#pragma once

#include <vector>

namespace swarmsense {

// One candidate mission for a single drone: the cells it senses in visit
// order, hover seconds per map cell, and the estimated energy cost. The
// departure and return legs are implicit.
struct Plan {
  std::vector<int> route;
  std::vector<double> hover;  // length = map cell count
  double cost = 0.0;          // J
  double total_time = 0.0;    // s, hover plus travel
};

struct PlanSet {
  int agent_id = 0;
  std::vector<Plan> plans;
};

// The per-cell hover vector is the unit of aggregation during selection.
inline const std::vector<double>& plan_sensing_vector(const Plan& plan) {
  return plan.hover;
}

}  // namespace swarmsense
