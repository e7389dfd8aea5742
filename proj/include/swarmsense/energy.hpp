#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "swarmsense/errors.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/sensing_map.hpp"

namespace swarmsense {

inline constexpr double kAirDensity = 1.225;  // kg/m^3 at sea level
inline constexpr double kGravity = 9.81;      // m/s^2

// Bench-measured powers of the reference quadrotor; calibration defaults.
inline constexpr double kDefaultHoverPowerW = 31.80;
inline constexpr double kDefaultManeuverPowerW = 31.92;
inline constexpr double kDefaultAvionicsPowerW = 2.0;

// Small indoor quadrotor. Defaults describe the reference drone.
struct DroneSpec {
  double mass_kg = 0.1;
  double prop_diameter_m = 0.0726;
  int prop_count = 4;
  double battery_capacity_mah = 1100.0;
  double nominal_voltage_v = 3.8;
  double usable_fraction = 0.9;  // battery fraction available to a mission
  double ground_speed_mps = 0.1;
  double max_flight_time_s = 420.0;

  double rotor_disk_area() const {
    double r = prop_diameter_m / 2.0;
    return prop_count * std::numbers::pi * r * r;
  }
};

inline void validate(const DroneSpec& spec) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("drone ") + name + " must be positive");
  };
  positive(spec.mass_kg, "mass");
  positive(spec.prop_diameter_m, "propeller diameter");
  if (spec.prop_count < 1) throw ConfigError("drone needs at least one propeller");
  positive(spec.battery_capacity_mah, "battery capacity");
  positive(spec.nominal_voltage_v, "nominal voltage");
  positive(spec.ground_speed_mps, "ground speed");
  positive(spec.max_flight_time_s, "max flight time");
  if (!(spec.usable_fraction > 0.0) || spec.usable_fraction > 1.0)
    throw ConfigError("usable battery fraction must lie in (0, 1]");
}

// Hover and translation power draw, calibrated against measurements.
struct EnergyModel {
  double hover_power_w = 0.0;
  double maneuver_power_w = 0.0;
  double propulsive_efficiency = 1.0;
  double avionics_power_w = 0.0;
  double air_density = kAirDensity;
  double gravity = kGravity;
};

struct EnergyEstimate {
  double hover_time_s = 0.0;
  double travel_time_s = 0.0;
  double hover_energy_j = 0.0;
  double travel_energy_j = 0.0;
  double total_energy_j = 0.0;
};

// Ideal actuator-disk induced power at hover: (m g)^(3/2) / sqrt(2 rho A).
inline double induced_hover_power(const DroneSpec& spec,
                                  double air_density = kAirDensity,
                                  double gravity = kGravity) {
  validate(spec);
  double thrust = spec.mass_kg * gravity;
  return std::pow(thrust, 1.5) / std::sqrt(2.0 * air_density * spec.rotor_disk_area());
}

// Fit the lumped propulsive efficiency so the model reproduces a measured
// hover power: hover = induced/eta + avionics. Maneuvering power is a fixed
// ratio of hover power; at 0.1 m/s drag is negligible so the ratio carries
// the measured difference.
inline EnergyModel calibrate(const DroneSpec& spec, double target_hover_w,
                             double avionics_w = kDefaultAvionicsPowerW,
                             double maneuver_ratio = kDefaultManeuverPowerW / kDefaultHoverPowerW,
                             double air_density = kAirDensity,
                             double gravity = kGravity) {
  if (avionics_w < 0.0) throw NumericError("avionics power cannot be negative");
  if (!(target_hover_w > avionics_w))
    throw NumericError("hover power target must exceed the avionics draw");
  if (maneuver_ratio < 1.0)
    throw NumericError("maneuvering power cannot fall below hover power");
  EnergyModel model;
  model.air_density = air_density;
  model.gravity = gravity;
  model.avionics_power_w = avionics_w;
  model.propulsive_efficiency =
      induced_hover_power(spec, air_density, gravity) / (target_hover_w - avionics_w);
  model.hover_power_w = target_hover_w;
  model.maneuver_power_w = target_hover_w * maneuver_ratio;
  return model;
}

inline double battery_energy(const DroneSpec& spec) {
  return spec.battery_capacity_mah / 1000.0 * spec.nominal_voltage_v * 3600.0;
}

inline double usable_battery_energy(const DroneSpec& spec) {
  return battery_energy(spec) * spec.usable_fraction;
}

// Closed-tour length: departure -> route cells in order -> departure.
inline double route_length(const SensingMap& map, const std::vector<int>& route) {
  if (route.empty()) return 0.0;
  double length = distance(map, map.departure_cell, route.front());
  for (std::size_t i = 0; i + 1 < route.size(); ++i)
    length += distance(map, route[i], route[i + 1]);
  length += distance(map, route.back(), map.departure_cell);
  return length;
}

inline EnergyEstimate plan_energy(const Plan& plan, const EnergyModel& model,
                                  const SensingMap& map, const DroneSpec& spec) {
  for (int cell : plan.route) check_cell(map, cell);
  if (!plan.hover.empty() &&
      plan.hover.size() != static_cast<std::size_t>(map.cell_count()))
    throw ConfigError("plan hover vector does not match the map cell count");
  EnergyEstimate e;
  for (double h : plan.hover) e.hover_time_s += h;
  e.travel_time_s = route_length(map, plan.route) / spec.ground_speed_mps;
  e.hover_energy_j = model.hover_power_w * e.hover_time_s;
  e.travel_energy_j = model.maneuver_power_w * e.travel_time_s;
  e.total_energy_j = e.hover_energy_j + e.travel_energy_j;
  return e;
}

// A plan is flyable iff it fits both the flight-time limit and the usable
// battery energy.
inline bool battery_feasible(const Plan& plan, const EnergyModel& model,
                             const SensingMap& map, const DroneSpec& spec) {
  EnergyEstimate e = plan_energy(plan, model, map, spec);
  double mission_time = e.hover_time_s + e.travel_time_s;
  return mission_time <= spec.max_flight_time_s &&
         e.total_energy_j <= usable_battery_energy(spec);
}

}  // namespace swarmsense
