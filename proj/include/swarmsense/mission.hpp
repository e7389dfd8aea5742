#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "swarmsense/energy.hpp"
#include "swarmsense/epos.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/rng.hpp"
#include "swarmsense/sensing_map.hpp"

namespace swarmsense {

enum class EventKind { takeoff, travel, hover, landing, calibration };

inline const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::takeoff: return "takeoff";
    case EventKind::travel: return "travel";
    case EventKind::hover: return "hover";
    case EventKind::landing: return "landing";
    case EventKind::calibration: return "calibration";
  }
  return "?";
}

struct MissionEvent {
  EventKind kind = EventKind::hover;
  int cell_from = -1;  // hover and calibration use cell_from == cell_to
  int cell_to = -1;
  double duration_s = 0.0;
  double energy_j = 0.0;
};

struct SimConfig {
  double calibration_s = 0.0;  // extra stabilization flight per mission
  double noise_sigma = 0.0;    // relative std-dev on per-event power
  double battery_start_pct = 100.0;
  std::vector<double> battery_start_per_drone;  // optional per-index override
  std::uint64_t seed = 0;
};

struct MissionLog {
  int uav_index = 0;
  std::vector<MissionEvent> events;
  double battery_start_pct = 100.0;
  double battery_end_pct = 100.0;
  double total_time_s = 0.0;
  double actual_energy_j = 0.0;
  double estimated_energy_j = 0.0;
  double calibration_time_s = 0.0;
  bool failed = false;      // battery exhausted mid-mission
  int failed_event = -1;    // index of the event that drained the battery
};

namespace detail {

inline void validate(const SimConfig& sim) {
  if (sim.calibration_s < 0.0) throw ConfigError("calibration time cannot be negative");
  if (sim.noise_sigma < 0.0) throw ConfigError("noise sigma cannot be negative");
  auto check_pct = [](double pct) {
    if (!(pct > 0.0) || pct > 100.0)
      throw ConfigError("battery start percentage must lie in (0, 100]");
  };
  check_pct(sim.battery_start_pct);
  for (double pct : sim.battery_start_per_drone) check_pct(pct);
}

}  // namespace detail

// Fly every selected plan in simulated time. Per drone the timeline is
// takeoff, calibration (maneuver power), the travel/hover sequence in route
// order with the return leg, landing. With noise_sigma > 0 each event's power
// draw is scaled by an independent Gaussian factor; drones consume
// independent rng substreams keyed by uav_index, so results do not depend on
// simulation order. A drone whose battery runs out mid-mission stops at the
// draining event and is flagged failed.
inline std::vector<MissionLog> execute_mission(const Selection& selection,
                                               const std::vector<PlanSet>& plan_sets,
                                               const SensingMap& map,
                                               const EnergyModel& model,
                                               const DroneSpec& spec,
                                               const SimConfig& sim) {
  detail::validate(sim);
  if (selection.plan_index.size() != plan_sets.size())
    throw ConfigError("selection does not cover the plan sets");
  if (!sim.battery_start_per_drone.empty() &&
      sim.battery_start_per_drone.size() != plan_sets.size())
    throw ConfigError("per-drone battery levels must cover every drone");

  std::vector<MissionLog> logs;
  logs.reserve(plan_sets.size());
  for (std::size_t a = 0; a < plan_sets.size(); ++a) {
    const Plan& plan = plan_sets[a].plans.at(selection.plan_index[a]);
    Rng rng = Rng::stream(sim.seed, rng_domain::kSim, a);

    MissionLog log;
    log.uav_index = static_cast<int>(a);
    log.battery_start_pct = sim.battery_start_per_drone.empty()
                                ? sim.battery_start_pct
                                : sim.battery_start_per_drone[a];
    log.estimated_energy_j = plan.cost;
    log.calibration_time_s = sim.calibration_s;

    double usable = usable_battery_energy(spec);
    double budget = usable * log.battery_start_pct / 100.0;

    auto noisy = [&](double power) {
      if (sim.noise_sigma <= 0.0) return power;
      return power * std::max(0.0, 1.0 + sim.noise_sigma * rng.gaussian());
    };
    auto push = [&](MissionEvent ev) {
      log.actual_energy_j += ev.energy_j;
      log.total_time_s += ev.duration_s;
      log.events.push_back(ev);
      if (!log.failed && log.actual_energy_j > budget) {
        log.failed = true;
        log.failed_event = static_cast<int>(log.events.size()) - 1;
      }
      return !log.failed;
    };

    bool alive = push({EventKind::takeoff, map.departure_cell, map.departure_cell, 0.0, 0.0});
    if (alive && sim.calibration_s > 0.0)
      alive = push({EventKind::calibration, map.departure_cell, map.departure_cell,
                    sim.calibration_s, noisy(model.maneuver_power_w) * sim.calibration_s});
    int at = map.departure_cell;
    for (std::size_t leg = 0; alive && !plan.route.empty() && leg <= plan.route.size();
         ++leg) {
      bool returning = leg == plan.route.size();
      int to = returning ? map.departure_cell : plan.route[leg];
      double seconds = distance(map, at, to) / spec.ground_speed_mps;
      alive = push({EventKind::travel, at, to, seconds,
                    noisy(model.maneuver_power_w) * seconds});
      at = to;
      if (alive && !returning) {
        double hover_s = plan.hover.at(to);
        alive = push({EventKind::hover, to, to, hover_s,
                      noisy(model.hover_power_w) * hover_s});
      }
    }
    if (alive) push({EventKind::landing, at, at, 0.0, 0.0});

    log.battery_end_pct =
        std::max(0.0, log.battery_start_pct - 100.0 * log.actual_energy_j / usable);
    logs.push_back(std::move(log));
  }
  return logs;
}

struct EnergyReconciliation {
  int uav_index = 0;
  double estimated_j = 0.0;
  double estimated_with_calibration_j = 0.0;
  double actual_j = 0.0;
  double error_j = 0.0;  // actual minus calibration-corrected estimate
};

// The estimate is corrected by the recorded calibration time at maneuver
// power; under a noiseless simulation the residual error is zero.
inline std::vector<EnergyReconciliation> reconcile_energy(
    const std::vector<MissionLog>& logs, const EnergyModel& model) {
  std::vector<EnergyReconciliation> out;
  out.reserve(logs.size());
  for (const MissionLog& log : logs) {
    EnergyReconciliation rec;
    rec.uav_index = log.uav_index;
    rec.estimated_j = log.estimated_energy_j;
    rec.estimated_with_calibration_j =
        log.estimated_energy_j + model.maneuver_power_w * log.calibration_time_s;
    rec.actual_j = log.actual_energy_j;
    rec.error_j = rec.actual_j - rec.estimated_with_calibration_j;
    out.push_back(rec);
  }
  return out;
}

// Per-cell sensed seconds accumulated trip by trip, from the executed hover
// events. Logs are expected in uav_index order. An empty fleet yields a
// single all-zero entry.
inline std::vector<std::vector<double>> cumulative_coverage(
    const std::vector<MissionLog>& logs, const SensingMap& map) {
  std::vector<double> running(map.cell_count(), 0.0);
  if (logs.empty()) return {running};
  std::vector<std::vector<double>> out;
  out.reserve(logs.size());
  for (const MissionLog& log : logs) {
    for (const MissionEvent& ev : log.events)
      if (ev.kind == EventKind::hover) {
        check_cell(map, ev.cell_to);
        running[ev.cell_to] += ev.duration_s;
      }
    out.push_back(running);
  }
  return out;
}

// Same series computed from the selected plans rather than executed events.
inline std::vector<std::vector<double>> cumulative_coverage(
    const Selection& selection, const std::vector<PlanSet>& plan_sets,
    const SensingMap& map) {
  std::vector<double> running(map.cell_count(), 0.0);
  if (plan_sets.empty()) return {running};
  if (selection.plan_index.size() != plan_sets.size())
    throw ConfigError("selection does not cover the plan sets");
  std::vector<std::vector<double>> out;
  out.reserve(plan_sets.size());
  for (std::size_t a = 0; a < plan_sets.size(); ++a) {
    const auto& vec = plan_sensing_vector(plan_sets[a].plans.at(selection.plan_index[a]));
    if (vec.size() != running.size())
      throw ConfigError("plan vector length does not match the map");
    for (std::size_t i = 0; i < running.size(); ++i) running[i] += vec[i];
    out.push_back(running);
  }
  return out;
}

}  // namespace swarmsense
