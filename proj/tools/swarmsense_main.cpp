#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <swarmsense/swarmsense.hpp>

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::string strategy = "epos";
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "run configuration file")
      ->required();
  cmd->add_option("--seed", opt.seed, "override the run seed");
  cmd->add_option("--beta", opt.beta, "override the local-cost weight");
  cmd->add_option("--strategy", opt.strategy, "plan selection strategy")
      ->check(CLI::IsMember({"epos", "greedy"}));
  cmd->add_option("--out-dir", opt.out_dir, "artifact directory");
  cmd->add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

struct Resolved {
  swarmsense::RunConfig cfg;
  swarmsense::RunContext ctx;
  std::uint64_t seed = 0;
  double beta = 0.0;
  swarmsense::Strategy strategy = swarmsense::Strategy::epos;
  std::filesystem::path dir;
  std::string format;
};

Resolved resolve(const CliOptions& opt) {
  Resolved r;
  r.cfg = swarmsense::load_config(opt.config_path);
  r.ctx = swarmsense::make_context(r.cfg);
  r.seed = swarmsense::resolve_seed(opt.seed, r.cfg);
  r.beta = opt.beta ? *opt.beta : r.cfg.beta;
  if (r.beta < 0.0 || r.beta > 1.0)
    throw swarmsense::ConfigError("beta must lie in [0, 1]");
  r.strategy = swarmsense::strategy_from_string(opt.strategy);
  r.dir = opt.out_dir ? std::filesystem::path(*opt.out_dir)
                      : std::filesystem::path(r.cfg.out_dir);
  r.format = opt.format ? *opt.format : r.cfg.format;
  if (r.format != "csv" && r.format != "json")
    throw swarmsense::ConfigError("output.format must be csv or json");
  return r;
}

int run_plan(const CliOptions& opt) {
  auto r = resolve(opt);
  auto sets = swarmsense::plan_stage(r.ctx, r.cfg, r.seed);
  std::filesystem::create_directories(r.dir);
  swarmsense::save_plans(r.dir / "plans.json", sets, r.ctx.model);
  std::cout << "wrote " << (r.dir / "plans.json").string() << " (" << sets.size()
            << " agents)\n";
  return 0;
}

int run_optimize(const CliOptions& opt) {
  auto r = resolve(opt);
  auto sets = swarmsense::load_plans(r.dir / "plans.json");
  auto rec = swarmsense::optimize_stage(sets, r.ctx, r.cfg, r.seed, r.strategy, r.beta);
  swarmsense::save_selection(r.dir / "selection.json", rec);
  std::ostringstream trace;
  swarmsense::emit_cost_trace(trace, rec.selection.cost_trace);
  swarmsense::detail::write_text(r.dir / "costtrace.csv", trace.str());
  std::cout << "strategy=" << rec.strategy
            << " cost=" << swarmsense::format_double(rec.selection.global_cost) << "\n";
  return 0;
}

int run_simulate(const CliOptions& opt) {
  auto r = resolve(opt);
  auto sets = swarmsense::load_plans(r.dir / "plans.json");
  auto rec = swarmsense::load_selection(r.dir / "selection.json");
  auto missions = swarmsense::simulate_stage(rec, sets, r.ctx, r.cfg, r.seed);
  swarmsense::save_missions(r.dir / "missions.json", missions);
  int failures = 0;
  for (const auto& log : missions.logs) failures += log.failed ? 1 : 0;
  std::cout << "simulated " << missions.logs.size() << " missions, " << failures
            << " failed\n";
  return 0;
}

int run_report(const CliOptions& opt) {
  auto r = resolve(opt);
  auto sets = swarmsense::load_plans(r.dir / "plans.json");
  auto rec = swarmsense::load_selection(r.dir / "selection.json");
  auto missions = swarmsense::load_missions(r.dir / "missions.json");
  auto report = swarmsense::report_stage(rec, sets, missions, r.ctx);
  swarmsense::write_report_files(r.dir, report, r.ctx.map, r.format);
  std::cout << "strategy=" << report.strategy
            << " rss=" << swarmsense::format_double(report.rss_mismatch)
            << " inefficiency=" << swarmsense::format_double(report.inefficiency)
            << " fleet_energy_j=" << swarmsense::format_double(report.fleet_energy_j)
            << "\n";
  return 0;
}

int run_all(const CliOptions& opt) {
  auto r = resolve(opt);
  auto result = swarmsense::run_pipeline(r.ctx, r.cfg, r.seed, r.strategy, r.beta);
  swarmsense::write_outputs(r.dir, result, r.ctx, r.format);
  std::cout << "strategy=" << result.report.strategy
            << " rss=" << swarmsense::format_double(result.report.rss_mismatch)
            << " inefficiency=" << swarmsense::format_double(result.report.inefficiency)
            << " fleet_energy_j=" << swarmsense::format_double(result.report.fleet_energy_j)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed sensing planner for small UAV swarms"};
  app.require_subcommand(1);

  CliOptions opt;
  auto* plan = app.add_subcommand("plan", "generate candidate plans");
  auto* optimize = app.add_subcommand("optimize", "select one plan per drone");
  auto* simulate = app.add_subcommand("simulate", "fly the selected plans");
  auto* report = app.add_subcommand("report", "summarize a finished run");
  auto* run = app.add_subcommand("run", "full pipeline in one go");
  for (auto* cmd : {plan, optimize, simulate, report, run}) add_common(cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (plan->parsed()) return run_plan(opt);
    if (optimize->parsed()) return run_optimize(opt);
    if (simulate->parsed()) return run_simulate(opt);
    if (report->parsed()) return run_report(opt);
    return run_all(opt);
  } catch (const swarmsense::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
