#pragma once

#include <string>

#include "popdyn/abm.hpp"
#include "popdyn/analysis.hpp"
#include "popdyn/pde.hpp"

namespace popdyn::io {

// Shortest bit-exact text form of a double (17 significant digits).
std::string g17(double v);

void write_abm_trace(const std::string& path, const abm::Trace& trace);

// One abm_hist_t<k>.csv per record carrying a histogram.
void write_abm_histograms(const std::string& dir, const abm::Trace& trace, const pde::Grid& grid);

void write_pde_trace(const std::string& path, const pde::Trace& trace);

// One pde_density_t<k>.csv per recorded snapshot.
void write_pde_densities(const std::string& dir, const pde::Trace& trace);

void write_report(const std::string& path, const analysis::ComparisonReport& report);

// Line plot of the two probability curves; a convenience view of report.csv.
void write_compare_svg(const std::string& path, const analysis::ComparisonReport& report);

}  // namespace popdyn::io
