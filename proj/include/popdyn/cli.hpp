#pragma once

#include "popdyn/scenario.hpp"

namespace popdyn::cli {

/// Run the ensemble simulator; writes abm_trace.csv and abm_hist_t<k>.csv into
/// the config's output directory.
int cmd_simulate(const scenario::ScenarioConfig& config);

/// Run the density solver; writes pde_trace.csv and pde_density_t<k>.csv.
int cmd_solve(const scenario::ScenarioConfig& config);

/// Run both, write report.csv and compare.svg, print a summary, and return
/// nonzero when the max gap exceeds the config tolerance.
int cmd_compare(const scenario::ScenarioConfig& config);

}  // namespace popdyn::cli
