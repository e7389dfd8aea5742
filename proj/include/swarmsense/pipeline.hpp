#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swarmsense/config.hpp"
#include "swarmsense/energy.hpp"
#include "swarmsense/epos.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/mission.hpp"
#include "swarmsense/plangen.hpp"
#include "swarmsense/report.hpp"
#include "swarmsense/sensing_map.hpp"
#include "swarmsense/serialize.hpp"

namespace swarmsense {

enum class Strategy { epos, greedy };

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "epos") return Strategy::epos;
  if (s == "greedy") return Strategy::greedy;
  throw ConfigError("unknown strategy '" + s + "' (expected epos or greedy)");
}

inline const char* to_string(Strategy s) {
  return s == Strategy::epos ? "epos" : "greedy";
}

struct RunContext {
  SensingMap map;
  Requirements requirements;
  DroneSpec spec;
  EnergyModel model;
};

// Requirements come either from an explicit per-cell file or from a density
// grid plus a fleet operating-time budget, never both.
inline RunContext make_context(const RunConfig& cfg) {
  RunContext ctx;
  ctx.map = build_map(cfg.map_rows, cfg.map_cols, cfg.map_width_m, cfg.map_height_m,
                      cfg.departure_cell, cfg.altitude_m);
  bool from_file = !cfg.requirements_file.empty();
  bool from_density = !cfg.density_file.empty();
  if (from_file == from_density)
    throw ConfigError(
        "set exactly one of map.requirements_file and map.density_file");
  if (from_file) {
    ctx.requirements = load_requirements(cfg.requirements_file, ctx.map);
  } else {
    if (!(cfg.operating_time_s > 0))
      throw ConfigError("map.density_file requires map.operating_time_s > 0");
    auto density = load_grid_csv(cfg.density_file, ctx.map);
    auto alloc = allocate_hover_time(density, cfg.operating_time_s);
    ctx.requirements.values = alloc.t;
    ctx.requirements.densities = std::move(density);
  }
  ctx.spec = cfg.drone;
  validate(ctx.spec);
  ctx.model = calibrate(ctx.spec, cfg.hover_power_w, cfg.avionics_power_w,
                        cfg.maneuver_power_w / cfg.hover_power_w, cfg.air_density,
                        cfg.gravity);
  return ctx;
}

inline std::vector<PlanSet> plan_stage(const RunContext& ctx, const RunConfig& cfg,
                                       std::uint64_t seed) {
  if (cfg.agents < 1) throw ConfigError("epos.agents must be at least 1");
  std::vector<PlanSet> sets;
  sets.reserve(cfg.agents);
  for (int a = 0; a < cfg.agents; ++a)
    sets.push_back(generate_plan_set(a, ctx.map, ctx.requirements, ctx.model,
                                     ctx.spec, seed, cfg.planner));
  return sets;
}

inline SelectionRecord optimize_stage(const std::vector<PlanSet>& sets,
                                      const RunContext& ctx, const RunConfig& cfg,
                                      std::uint64_t seed, Strategy strategy,
                                      double beta) {
  SelectionRecord rec;
  rec.strategy = to_string(strategy);
  rec.seed = seed;
  if (strategy == Strategy::greedy) {
    rec.beta = 1.0;  // greedy ignores the target by definition
    rec.selection = greedy_select(sets);
    return rec;
  }
  rec.beta = beta;
  auto tree = build_tree(static_cast<int>(sets.size()), seed);
  EposConfig ec;
  ec.iterations = cfg.iterations;
  ec.beta = beta;
  ec.seed = seed;
  rec.selection = run_epos(sets, ctx.requirements.values, tree, ec);
  return rec;
}

inline MissionRecord simulate_stage(const SelectionRecord& rec,
                                    const std::vector<PlanSet>& sets,
                                    const RunContext& ctx, const RunConfig& cfg,
                                    std::uint64_t seed) {
  SimConfig sim = cfg.sim;
  sim.seed = seed;
  MissionRecord out;
  out.logs = execute_mission(rec.selection, sets, ctx.map, ctx.model, ctx.spec, sim);
  out.reconciliation = reconcile_energy(out.logs, ctx.model);
  return out;
}

inline RunReport report_stage(const SelectionRecord& rec,
                              const std::vector<PlanSet>& sets,
                              const MissionRecord& missions, const RunContext& ctx) {
  return summarize(rec.selection, missions.logs, ctx.requirements, ctx.model,
                   ctx.map, sets, rec.strategy, rec.beta);
}

struct PipelineResult {
  std::vector<PlanSet> plan_sets;
  SelectionRecord selection;
  MissionRecord missions;
  RunReport report;
};

inline PipelineResult run_pipeline(const RunContext& ctx, const RunConfig& cfg,
                                   std::uint64_t seed, Strategy strategy,
                                   double beta) {
  PipelineResult result;
  result.plan_sets = plan_stage(ctx, cfg, seed);
  result.selection = optimize_stage(result.plan_sets, ctx, cfg, seed, strategy, beta);
  result.missions = simulate_stage(result.selection, result.plan_sets, ctx, cfg, seed);
  result.report = report_stage(result.selection, result.plan_sets, result.missions, ctx);
  return result;
}

inline void write_report_files(const std::filesystem::path& dir, const RunReport& report,
                               const SensingMap& map, const std::string& format) {
  if (format == "json") {
    detail::write_text(dir / "table.json", table_to_json(report).dump(2) + "\n");
    detail::write_text(dir / "series.json",
                       trip_series_to_json(report, map).dump(2) + "\n");
  } else {
    std::ostringstream table;
    emit_table(table, report);
    detail::write_text(dir / "table.csv", table.str());
    std::ostringstream series;
    emit_trip_series(series, report, map);
    detail::write_text(dir / "series.csv", series.str());
  }
}

inline void write_outputs(const std::filesystem::path& dir, const PipelineResult& result,
                          const RunContext& ctx, const std::string& format) {
  std::filesystem::create_directories(dir);
  save_plans(dir / "plans.json", result.plan_sets, ctx.model);
  save_selection(dir / "selection.json", result.selection);
  std::ostringstream trace;
  emit_cost_trace(trace, result.selection.selection.cost_trace);
  detail::write_text(dir / "costtrace.csv", trace.str());
  save_missions(dir / "missions.json", result.missions);
  write_report_files(dir, result.report, ctx.map, format);
}

}  // namespace swarmsense
