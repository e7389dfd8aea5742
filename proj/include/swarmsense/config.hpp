#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "swarmsense/energy.hpp"
#include "swarmsense/epos.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/mission.hpp"
#include "swarmsense/plangen.hpp"
#include "swarmsense/sensing_map.hpp"

namespace swarmsense {

// Whole-run configuration. Parsed from flat `section.key = value` text;
// `#` starts a comment, blank lines are skipped. Relative file paths resolve
// against the config file's directory.
struct RunConfig {
  // map.*
  int map_rows = 4;
  int map_cols = 4;
  double map_width_m = 1.68;
  double map_height_m = 1.18;
  int departure_cell = 0;
  double altitude_m = 0.40;
  std::string requirements_file;
  std::string density_file;
  double operating_time_s = 0.0;  // budget for density-derived requirements

  // drone.*
  DroneSpec drone;

  // energy.*
  double hover_power_w = kDefaultHoverPowerW;
  double maneuver_power_w = kDefaultManeuverPowerW;
  double avionics_power_w = kDefaultAvionicsPowerW;
  double air_density = kAirDensity;
  double gravity = kGravity;

  // planner.*
  PlannerConfig planner;

  // epos.*
  int agents = 10;
  int iterations = 40;
  double beta = 0.0;
  std::optional<std::uint64_t> seed;  // unset falls back to SWARMSENSE_SEED

  // sim.*
  SimConfig sim;

  // output.*
  std::string out_dir = "out";
  std::string format = "csv";
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
  T out{};
  std::string t = trim(value);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError("bad value '" + value + "' for key " + key);
  return out;
}

inline std::vector<double> parse_number_list(const std::string& value,
                                             const std::string& key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = value.find(';', start);
    std::string tok = value.substr(
        start, sep == std::string::npos ? std::string::npos : sep - start);
    out.push_back(parse_number<double>(tok, key));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                              const std::string& origin = "<config>") {
  RunConfig cfg;
  std::string line;
  int lineno = 0;

  auto resolve = [&](const std::string& path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? p.string() : (base_dir / p).string();
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));

    using detail::parse_number;
    using detail::parse_number_list;
    if (key == "map.rows") cfg.map_rows = parse_number<int>(value, key);
    else if (key == "map.cols") cfg.map_cols = parse_number<int>(value, key);
    else if (key == "map.width_m") cfg.map_width_m = parse_number<double>(value, key);
    else if (key == "map.height_m") cfg.map_height_m = parse_number<double>(value, key);
    else if (key == "map.departure_cell") cfg.departure_cell = parse_number<int>(value, key);
    else if (key == "map.altitude_m") cfg.altitude_m = parse_number<double>(value, key);
    else if (key == "map.requirements_file") cfg.requirements_file = resolve(value);
    else if (key == "map.density_file") cfg.density_file = resolve(value);
    else if (key == "map.operating_time_s") cfg.operating_time_s = parse_number<double>(value, key);
    else if (key == "drone.mass_kg") cfg.drone.mass_kg = parse_number<double>(value, key);
    else if (key == "drone.prop_diameter_m") cfg.drone.prop_diameter_m = parse_number<double>(value, key);
    else if (key == "drone.prop_count") cfg.drone.prop_count = parse_number<int>(value, key);
    else if (key == "drone.battery_capacity_mah") cfg.drone.battery_capacity_mah = parse_number<double>(value, key);
    else if (key == "drone.nominal_voltage_v") cfg.drone.nominal_voltage_v = parse_number<double>(value, key);
    else if (key == "drone.usable_fraction") cfg.drone.usable_fraction = parse_number<double>(value, key);
    else if (key == "drone.ground_speed_mps") cfg.drone.ground_speed_mps = parse_number<double>(value, key);
    else if (key == "drone.max_flight_time_s") cfg.drone.max_flight_time_s = parse_number<double>(value, key);
    else if (key == "energy.hover_power_w") cfg.hover_power_w = parse_number<double>(value, key);
    else if (key == "energy.maneuver_power_w") cfg.maneuver_power_w = parse_number<double>(value, key);
    else if (key == "energy.avionics_power_w") cfg.avionics_power_w = parse_number<double>(value, key);
    else if (key == "energy.air_density") cfg.air_density = parse_number<double>(value, key);
    else if (key == "energy.gravity") cfg.gravity = parse_number<double>(value, key);
    else if (key == "planner.plans_per_agent") cfg.planner.plans_per_agent = parse_number<int>(value, key);
    else if (key == "planner.retry_budget") cfg.planner.retry_budget = parse_number<int>(value, key);
    else if (key == "epos.agents") cfg.agents = parse_number<int>(value, key);
    else if (key == "epos.iterations") cfg.iterations = parse_number<int>(value, key);
    else if (key == "epos.beta") cfg.beta = parse_number<double>(value, key);
    else if (key == "epos.seed") cfg.seed = parse_number<std::uint64_t>(value, key);
    else if (key == "sim.calibration_s") cfg.sim.calibration_s = parse_number<double>(value, key);
    else if (key == "sim.noise_sigma") cfg.sim.noise_sigma = parse_number<double>(value, key);
    else if (key == "sim.battery_start_pct") {
      auto list = parse_number_list(value, key);
      if (list.size() == 1) {
        cfg.sim.battery_start_pct = list.front();
        cfg.sim.battery_start_per_drone.clear();
      } else {
        cfg.sim.battery_start_per_drone = list;
      }
    }
    else if (key == "output.dir") cfg.out_dir = value;  // relative to the caller's cwd
    else if (key == "output.format") cfg.format = value;
    else throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  return parse_config(in, std::filesystem::absolute(file).parent_path(), file.string());
}

// Seed precedence: explicit flag, then the config file, then the
// SWARMSENSE_SEED environment variable, then zero.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed,
                                  const RunConfig& cfg,
                                  const char* env_value = std::getenv("SWARMSENSE_SEED")) {
  if (cli_seed) return *cli_seed;
  if (cfg.seed) return *cfg.seed;
  if (env_value && *env_value)
    return detail::parse_number<std::uint64_t>(env_value, "SWARMSENSE_SEED");
  return 0;
}

}  // namespace swarmsense
