#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "swarmsense/energy.hpp"
#include "swarmsense/epos.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/mission.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/report.hpp"
#include "swarmsense/sensing_map.hpp"

namespace swarmsense {

// Shortest representation that parses back to the same bits. CSV output
// goes through here so repeated runs are byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw NumericError("double formatting failed");
  return std::string(buf, ptr);
}

struct SelectionRecord {
  std::string strategy = "epos";
  double beta = 0.0;
  std::uint64_t seed = 0;
  Selection selection;
};

struct MissionRecord {
  std::vector<MissionLog> logs;
  std::vector<EnergyReconciliation> reconciliation;
};

namespace detail {

inline void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << text;
}

inline std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_file(const std::filesystem::path& file) {
  auto j = nlohmann::json::parse(read_text(file), nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + file.string());
  return j;
}

inline EventKind event_kind_from_string(const std::string& s) {
  if (s == "takeoff") return EventKind::takeoff;
  if (s == "travel") return EventKind::travel;
  if (s == "hover") return EventKind::hover;
  if (s == "landing") return EventKind::landing;
  if (s == "calibration") return EventKind::calibration;
  throw ConfigError("unknown event kind '" + s + "'");
}

}  // namespace detail

inline nlohmann::json plans_to_json(const std::vector<PlanSet>& sets,
                                    const EnergyModel& model) {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& set : sets) {
    nlohmann::json plans = nlohmann::json::array();
    for (const auto& p : set.plans) {
      plans.push_back({{"route", p.route},
                       {"hover_s", p.hover},
                       {"cost_j", p.cost},
                       {"total_time_s", p.total_time}});
    }
    agents.push_back({{"agent_id", set.agent_id}, {"plans", std::move(plans)}});
  }
  return {{"agents", std::move(agents)},
          {"energy_model",
           {{"hover_power_w", model.hover_power_w},
            {"maneuver_power_w", model.maneuver_power_w},
            {"propulsive_efficiency", model.propulsive_efficiency},
            {"avionics_power_w", model.avionics_power_w},
            {"air_density", model.air_density},
            {"gravity", model.gravity}}}};
}

inline std::vector<PlanSet> plans_from_json(const nlohmann::json& j,
                                            EnergyModel* model_out = nullptr) {
  std::vector<PlanSet> sets;
  for (const auto& a : j.at("agents")) {
    PlanSet set;
    set.agent_id = a.at("agent_id").get<int>();
    for (const auto& p : a.at("plans")) {
      Plan plan;
      plan.route = p.at("route").get<std::vector<int>>();
      plan.hover = p.at("hover_s").get<std::vector<double>>();
      plan.cost = p.at("cost_j").get<double>();
      plan.total_time = p.at("total_time_s").get<double>();
      set.plans.push_back(std::move(plan));
    }
    sets.push_back(std::move(set));
  }
  if (model_out && j.contains("energy_model")) {
    const auto& m = j.at("energy_model");
    model_out->hover_power_w = m.at("hover_power_w").get<double>();
    model_out->maneuver_power_w = m.at("maneuver_power_w").get<double>();
    model_out->propulsive_efficiency = m.at("propulsive_efficiency").get<double>();
    model_out->avionics_power_w = m.at("avionics_power_w").get<double>();
    model_out->air_density = m.at("air_density").get<double>();
    model_out->gravity = m.at("gravity").get<double>();
  }
  return sets;
}

inline void save_plans(const std::filesystem::path& file,
                       const std::vector<PlanSet>& sets, const EnergyModel& model) {
  detail::write_text(file, plans_to_json(sets, model).dump(2) + "\n");
}

inline std::vector<PlanSet> load_plans(const std::filesystem::path& file,
                                       EnergyModel* model_out = nullptr) {
  return plans_from_json(detail::parse_json_file(file), model_out);
}

inline nlohmann::json selection_to_json(const SelectionRecord& rec) {
  return {{"strategy", rec.strategy},
          {"beta", rec.beta},
          {"seed", rec.seed},
          {"plan_index", rec.selection.plan_index},
          {"global_response", rec.selection.global_response},
          {"global_cost", rec.selection.global_cost},
          {"cost_trace", rec.selection.cost_trace}};
}

inline SelectionRecord selection_from_json(const nlohmann::json& j) {
  SelectionRecord rec;
  rec.strategy = j.at("strategy").get<std::string>();
  rec.beta = j.at("beta").get<double>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.selection.plan_index = j.at("plan_index").get<std::vector<int>>();
  rec.selection.global_response = j.at("global_response").get<std::vector<double>>();
  rec.selection.global_cost = j.at("global_cost").get<double>();
  rec.selection.cost_trace = j.at("cost_trace").get<std::vector<double>>();
  return rec;
}

inline void save_selection(const std::filesystem::path& file, const SelectionRecord& rec) {
  detail::write_text(file, selection_to_json(rec).dump(2) + "\n");
}

inline SelectionRecord load_selection(const std::filesystem::path& file) {
  return selection_from_json(detail::parse_json_file(file));
}

inline nlohmann::json missions_to_json(const MissionRecord& rec) {
  nlohmann::json logs = nlohmann::json::array();
  for (const auto& log : rec.logs) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& ev : log.events) {
      events.push_back({{"kind", to_string(ev.kind)},
                        {"cell_from", ev.cell_from},
                        {"cell_to", ev.cell_to},
                        {"duration_s", ev.duration_s},
                        {"energy_j", ev.energy_j}});
    }
    logs.push_back({{"uav_index", log.uav_index},
                    {"events", std::move(events)},
                    {"battery_start_pct", log.battery_start_pct},
                    {"battery_end_pct", log.battery_end_pct},
                    {"total_time_s", log.total_time_s},
                    {"actual_energy_j", log.actual_energy_j},
                    {"estimated_energy_j", log.estimated_energy_j},
                    {"calibration_time_s", log.calibration_time_s},
                    {"failed", log.failed},
                    {"failed_event", log.failed_event}});
  }
  nlohmann::json recon = nlohmann::json::array();
  for (const auto& r : rec.reconciliation) {
    recon.push_back({{"uav_index", r.uav_index},
                     {"estimated_j", r.estimated_j},
                     {"estimated_with_calibration_j", r.estimated_with_calibration_j},
                     {"actual_j", r.actual_j},
                     {"error_j", r.error_j}});
  }
  return {{"missions", std::move(logs)}, {"reconciliation", std::move(recon)}};
}

inline MissionRecord missions_from_json(const nlohmann::json& j) {
  MissionRecord rec;
  for (const auto& l : j.at("missions")) {
    MissionLog log;
    log.uav_index = l.at("uav_index").get<int>();
    for (const auto& e : l.at("events")) {
      MissionEvent ev;
      ev.kind = detail::event_kind_from_string(e.at("kind").get<std::string>());
      ev.cell_from = e.at("cell_from").get<int>();
      ev.cell_to = e.at("cell_to").get<int>();
      ev.duration_s = e.at("duration_s").get<double>();
      ev.energy_j = e.at("energy_j").get<double>();
      log.events.push_back(ev);
    }
    log.battery_start_pct = l.at("battery_start_pct").get<double>();
    log.battery_end_pct = l.at("battery_end_pct").get<double>();
    log.total_time_s = l.at("total_time_s").get<double>();
    log.actual_energy_j = l.at("actual_energy_j").get<double>();
    log.estimated_energy_j = l.at("estimated_energy_j").get<double>();
    log.calibration_time_s = l.at("calibration_time_s").get<double>();
    log.failed = l.at("failed").get<bool>();
    log.failed_event = l.at("failed_event").get<int>();
    rec.logs.push_back(std::move(log));
  }
  for (const auto& r : j.at("reconciliation")) {
    EnergyReconciliation er;
    er.uav_index = r.at("uav_index").get<int>();
    er.estimated_j = r.at("estimated_j").get<double>();
    er.estimated_with_calibration_j = r.at("estimated_with_calibration_j").get<double>();
    er.actual_j = r.at("actual_j").get<double>();
    er.error_j = r.at("error_j").get<double>();
    rec.reconciliation.push_back(er);
  }
  return rec;
}

inline void save_missions(const std::filesystem::path& file, const MissionRecord& rec) {
  detail::write_text(file, missions_to_json(rec).dump(2) + "\n");
}

inline MissionRecord load_missions(const std::filesystem::path& file) {
  return missions_from_json(detail::parse_json_file(file));
}

inline constexpr const char* kTableHeader =
    "uav_index,battery_start_pct,battery_end_pct,battery_diff_pct,"
    "visited_cells,total_time_s,actual_power_w,hover_power_w,maneuver_power_w";

inline std::string joined_cells(const std::vector<int>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(cells[i]);
  }
  return out;
}

inline void emit_table(std::ostream& out, const RunReport& report) {
  out << kTableHeader << '\n';
  for (const auto& row : report.rows) {
    out << row.uav_index << ',' << format_double(row.battery_start_pct) << ','
        << format_double(row.battery_end_pct) << ','
        << format_double(row.battery_diff_pct) << ',' << joined_cells(row.visited_cells)
        << ',' << format_double(row.total_time_s) << ','
        << format_double(row.actual_power_w) << ',' << format_double(row.hover_power_w)
        << ',' << format_double(row.maneuver_power_w) << '\n';
  }
}

inline nlohmann::json table_to_json(const RunReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"uav_index", row.uav_index},
                    {"battery_start_pct", row.battery_start_pct},
                    {"battery_end_pct", row.battery_end_pct},
                    {"battery_diff_pct", row.battery_diff_pct},
                    {"visited_cells", row.visited_cells},
                    {"total_time_s", row.total_time_s},
                    {"actual_power_w", row.actual_power_w},
                    {"hover_power_w", row.hover_power_w},
                    {"maneuver_power_w", row.maneuver_power_w}});
  }
  return {{"strategy", report.strategy},
          {"beta", report.beta},
          {"rss_mismatch", report.rss_mismatch},
          {"inefficiency", report.inefficiency},
          {"fleet_energy_j", report.fleet_energy_j},
          {"rows", std::move(rows)}};
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = line.find(',', start);
    out.push_back(line.substr(
        start, sep == std::string::npos ? std::string::npos : sep - start));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return out;
}

inline int parse_strict_int(const std::string& tok, const std::string& origin) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ConfigError("bad value '" + tok + "' in " + origin);
  return v;
}

inline std::vector<int> parse_cell_list(const std::string& field) {
  std::vector<int> cells;
  if (field.empty()) return cells;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = field.find(';', start);
    std::string tok = field.substr(
        start, sep == std::string::npos ? std::string::npos : sep - start);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw ConfigError("bad cell list entry '" + tok + "'");
    cells.push_back(v);
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return cells;
}

}  // namespace detail

inline std::vector<DroneRow> parse_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty summary table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTableHeader) throw ConfigError("unexpected summary table header");
  std::vector<DroneRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != 9) throw ConfigError("summary table row has wrong arity");
    DroneRow row;
    row.uav_index = detail::parse_strict_int(fields[0], "uav_index");
    row.battery_start_pct = detail::parse_strict_double(fields[1]);
    row.battery_end_pct = detail::parse_strict_double(fields[2]);
    row.battery_diff_pct = detail::parse_strict_double(fields[3]);
    row.visited_cells = detail::parse_cell_list(fields[4]);
    row.total_time_s = detail::parse_strict_double(fields[5]);
    row.actual_power_w = detail::parse_strict_double(fields[6]);
    row.hover_power_w = detail::parse_strict_double(fields[7]);
    row.maneuver_power_w = detail::parse_strict_double(fields[8]);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Coverage progression per trip. CSV rows hold one grid row each; the target
// block comes first so plots can diff against it directly.
inline void emit_trip_series(std::ostream& out, const RunReport& report,
                             const SensingMap& map) {
  out << "trip,row";
  for (int c = 0; c < map.cols; ++c) out << ",col" << c;
  out << '\n';
  auto emit_grid = [&](const std::string& label, const std::vector<double>& grid) {
    for (int r = 0; r < map.rows; ++r) {
      out << label << ',' << r;
      for (int c = 0; c < map.cols; ++c)
        out << ',' << format_double(grid[map.index_of(r, c)]);
      out << '\n';
    }
  };
  emit_grid("target", report.requirements);
  for (std::size_t t = 0; t < report.trip_series.size(); ++t)
    emit_grid(std::to_string(t + 1), report.trip_series[t]);
}

inline nlohmann::json trip_series_to_json(const RunReport& report,
                                          const SensingMap& map) {
  return {{"rows", map.rows},
          {"cols", map.cols},
          {"target", report.requirements},
          {"trips", report.trip_series}};
}

struct TripSeries {
  int rows = 0;
  int cols = 0;
  std::vector<double> target;
  std::vector<std::vector<double>> trips;
};

inline TripSeries parse_trip_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trip series");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = detail::split_csv_line(line);
  if (header.size() < 3 || header[0] != "trip" || header[1] != "row")
    throw ConfigError("unexpected trip series header");
  TripSeries series;
  series.cols = static_cast<int>(header.size()) - 2;
  std::vector<std::pair<std::string, std::vector<double>>> blocks;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw ConfigError("trip series row has wrong arity");
    if (blocks.empty() || blocks.back().first != fields[0]) blocks.push_back({fields[0], {}});
    for (std::size_t i = 2; i < fields.size(); ++i)
      blocks.back().second.push_back(detail::parse_strict_double(fields[i]));
  }
  if (blocks.empty() || blocks.front().first != "target")
    throw ConfigError("trip series is missing the target block");
  series.rows = static_cast<int>(blocks.front().second.size()) / series.cols;
  series.target = std::move(blocks.front().second);
  for (std::size_t b = 1; b < blocks.size(); ++b)
    series.trips.push_back(std::move(blocks[b].second));
  return series;
}

inline void emit_cost_trace(std::ostream& out, const std::vector<double>& trace) {
  out << "round,cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << (i + 1) << ',' << format_double(trace[i]) << '\n';
}

inline std::vector<double> parse_cost_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty cost trace");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "round,cost") throw ConfigError("unexpected cost trace header");
  std::vector<double> trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != 2) throw ConfigError("cost trace row has wrong arity");
    trace.push_back(detail::parse_strict_double(fields[1]));
  }
  return trace;
}

}  // namespace swarmsense
