#pragma once

#include <utility>
#include <vector>

#include "popdyn/abm.hpp"
#include "popdyn/pde.hpp"

namespace popdyn::analysis {

struct DerivativeCheck {
  double rhs = 0.0;
  double rel_error = 0.0;
};

/// Expected-probability balance for a 1-D policy density: the quadrature value
/// of (r2 - r1) * integral pi1*(pi1 - 1)*p dpi1, evaluated in the same
/// donor-cell flux form as the solver so the residual against a numeric dE/dt
/// is purely temporal. `numeric_dEdt` must be on the drift's unit-time clock.
DerivativeCheck expected_derivative_check(const pde::DensityField& density, const pde::Grid& grid,
                                          const std::vector<double>& rewards, double numeric_dEdt);

/// L1 norm of the discrete flux divergence: zero iff the density is steady
/// under the velocity field.
double steady_residual(const pde::DensityField& density, const pde::Grid& grid,
                       const pde::VelocityField& velocity);

struct ComparisonReport {
  std::vector<double> t;
  std::vector<double> pde_prob;
  std::vector<double> abm_prob;
  std::vector<double> gap;
  double max_gap = 0.0;
  double mean_gap = 0.0;
  // (t, L1 distance) wherever both a simulation histogram and a density
  // snapshot were recorded.
  std::vector<std::pair<double, double>> hist_l1;
};

/// Align a density trace with an ensemble-averaged simulation trace and report
/// per-time absolute gaps in the action-0 probability.
ComparisonReport compare(const pde::Trace& pde_trace, const abm::Trace& abm_trace);

}  // namespace popdyn::analysis
