#include "popdyn/cli.hpp"

#include <cstdio>
#include <filesystem>

#include "popdyn/abm.hpp"
#include "popdyn/analysis.hpp"
#include "popdyn/io.hpp"
#include "popdyn/pde.hpp"

namespace popdyn::cli {

namespace {

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

abm::Trace run_abm(const scenario::ScenarioConfig& cfg, const pde::Grid& grid) {
  return abm::run_ensemble(cfg.game, cfg.learner, cfg.init, cfg.n, cfg.horizon, cfg.runs, cfg.seed,
                           &grid, &cfg.snapshot_times);
}

pde::Trace run_pde(const scenario::ScenarioConfig& cfg, const pde::Grid& grid) {
  return pde::solve(cfg.game, cfg.learner, cfg.init, grid, cfg.horizon,
                    {cfg.snapshot_times, cfg.min_substeps});
}

}  // namespace

int cmd_simulate(const scenario::ScenarioConfig& config) {
  scenario::validate(config);
  ensure_out_dir(config.out_dir);
  const pde::Grid grid = pde::grid_for(config.learner, config.game, config.grid_cells);
  const abm::Trace trace = run_abm(config, grid);
  io::write_abm_trace(config.out_dir + "/abm_trace.csv", trace);
  io::write_abm_histograms(config.out_dir, trace, grid);
  std::printf("simulate: %d runs x %d agents, horizon %d -> %s\n", config.runs, config.n,
              config.horizon, config.out_dir.c_str());
  return 0;
}

int cmd_solve(const scenario::ScenarioConfig& config) {
  scenario::validate(config);
  ensure_out_dir(config.out_dir);
  const pde::Grid grid = pde::grid_for(config.learner, config.game, config.grid_cells);
  const pde::Trace trace = run_pde(config, grid);
  io::write_pde_trace(config.out_dir + "/pde_trace.csv", trace);
  io::write_pde_densities(config.out_dir, trace);
  std::printf("solve: horizon %d on %lld cells -> %s\n", config.horizon,
              static_cast<long long>(grid.cell_count()), config.out_dir.c_str());
  return 0;
}

int cmd_compare(const scenario::ScenarioConfig& config) {
  scenario::validate(config);
  ensure_out_dir(config.out_dir);
  const pde::Grid grid = pde::grid_for(config.learner, config.game, config.grid_cells);
  const pde::Trace pde_trace = run_pde(config, grid);
  const abm::Trace abm_trace = run_abm(config, grid);
  const analysis::ComparisonReport report = analysis::compare(pde_trace, abm_trace);
  io::write_report(config.out_dir + "/report.csv", report);
  io::write_compare_svg(config.out_dir + "/compare.svg", report);
  const bool ok = report.max_gap <= config.tolerance;
  std::printf("compare: max_gap=%.6g mean_gap=%.6g tolerance=%g -> %s\n", report.max_gap,
              report.mean_gap, config.tolerance, ok ? "ok" : "gap exceeds tolerance");
  for (const auto& [t, l1] : report.hist_l1) {
    std::printf("compare: hist_l1[t=%g]=%.6g\n", t, l1);
  }
  return ok ? 0 : 1;
}

}  // namespace popdyn::cli
