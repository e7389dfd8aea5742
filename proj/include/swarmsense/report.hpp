#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "swarmsense/energy.hpp"
#include "swarmsense/epos.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/mission.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/sensing_map.hpp"

namespace swarmsense {

// One table row per drone; column semantics follow the per-drone results
// table: battery levels, visited cells, total time and the power figures.
struct DroneRow {
  int uav_index = 0;
  double battery_start_pct = 0.0;
  double battery_end_pct = 0.0;
  double battery_diff_pct = 0.0;
  std::vector<int> visited_cells;  // ascending
  double total_time_s = 0.0;
  double actual_power_w = 0.0;
  double hover_power_w = 0.0;
  double maneuver_power_w = 0.0;
};

struct RunReport {
  std::string strategy;  // "epos" or "greedy"
  double beta = 0.0;
  double rss_mismatch = 0.0;
  double inefficiency = 0.0;   // fraction of required sensing left unmet
  double fleet_energy_j = 0.0;
  std::vector<DroneRow> rows;
  std::vector<std::vector<double>> trip_series;  // cumulative grid per trip
  std::vector<double> requirements;              // target grid
  std::vector<double> global_response;
  std::vector<double> cost_trace;
};

// Fraction of the required sensing seconds the fleet did not deliver.
// Oversensing a cell earns no credit elsewhere.
inline double mission_inefficiency(const std::vector<double>& aggregate,
                                   const std::vector<double>& requirements) {
  if (aggregate.size() != requirements.size())
    throw NumericError("aggregate and requirements differ in length");
  double required = 0.0;
  double shortfall = 0.0;
  for (std::size_t i = 0; i < requirements.size(); ++i) {
    if (requirements[i] < 0.0) throw NumericError("requirements must be non-negative");
    required += requirements[i];
    shortfall += std::max(0.0, requirements[i] - aggregate[i]);
  }
  if (!(required > 0.0)) throw NumericError("requirements sum to zero");
  return shortfall / required;
}

inline RunReport summarize(const Selection& selection,
                           const std::vector<MissionLog>& logs,
                           const Requirements& requirements,
                           const EnergyModel& model, const SensingMap& map,
                           const std::vector<PlanSet>& plan_sets,
                           const std::string& strategy = "epos", double beta = 0.0) {
  if (logs.size() != plan_sets.size() ||
      selection.plan_index.size() != plan_sets.size())
    throw ConfigError("selection, logs and plan sets must cover the same drones");

  RunReport report;
  report.strategy = strategy;
  report.beta = beta;
  report.requirements = requirements.values;
  report.cost_trace = selection.cost_trace;
  report.trip_series = cumulative_coverage(logs, map);
  report.global_response = selection.global_response;

  const std::vector<double>& aggregate = report.trip_series.back();
  report.rss_mismatch = rss(aggregate, requirements.values);  // throws on a zero run
  report.inefficiency = mission_inefficiency(aggregate, requirements.values);

  for (std::size_t a = 0; a < logs.size(); ++a) {
    const MissionLog& log = logs[a];
    DroneRow row;
    row.uav_index = log.uav_index;
    row.battery_start_pct = log.battery_start_pct;
    row.battery_end_pct = log.battery_end_pct;
    row.battery_diff_pct = log.battery_start_pct - log.battery_end_pct;
    row.visited_cells = plan_sets[a].plans.at(selection.plan_index[a]).route;
    std::sort(row.visited_cells.begin(), row.visited_cells.end());
    row.total_time_s = log.total_time_s;
    row.actual_power_w = log.total_time_s > 0.0
                             ? log.actual_energy_j / log.total_time_s
                             : 0.0;
    row.hover_power_w = model.hover_power_w;
    row.maneuver_power_w = model.maneuver_power_w;
    report.rows.push_back(std::move(row));
    report.fleet_energy_j += log.actual_energy_j;
  }
  return report;
}

}  // namespace swarmsense
