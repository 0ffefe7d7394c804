#include "popdyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace popdyn::analysis {

DerivativeCheck expected_derivative_check(const pde::DensityField& density, const pde::Grid& grid,
                                          const std::vector<double>& rewards,
                                          double numeric_dEdt) {
  if (grid.dim() != 1) {
    throw std::domain_error("expected_derivative_check: needs a 1-D policy density");
  }
  if (rewards.size() != 2) {
    throw std::domain_error("expected_derivative_check: expected 2 rewards");
  }
  if (static_cast<std::int64_t>(density.values.size()) != grid.cell_count()) {
    throw std::domain_error("expected_derivative_check: density does not match grid");
  }
  const auto& d = grid.dims[0];
  const double gap = rewards[0] - rewards[1];
  // Summation by parts turns sum_i x_i * dp_i/dt into h * sum of face fluxes,
  // so this quadrature is the exact spatial counterpart of the upwind solver.
  double rhs = 0.0;
  for (int f = 1; f < d.cells; ++f) {
    const size_t a = static_cast<size_t>(f - 1);
    const size_t b = static_cast<size_t>(f);
    const double va = gap * d.centers[a] * (1.0 - d.centers[a]);
    const double vb = gap * d.centers[b] * (1.0 - d.centers[b]);
    rhs += std::max(va, 0.0) * density.values[a] + std::min(vb, 0.0) * density.values[b];
  }
  rhs *= d.h;
  DerivativeCheck out;
  out.rhs = rhs;
  out.rel_error = std::abs(numeric_dEdt - rhs) / std::max(std::abs(rhs), 1e-12);
  return out;
}

double steady_residual(const pde::DensityField& density, const pde::Grid& grid,
                       const pde::VelocityField& velocity) {
  if (static_cast<std::int64_t>(density.values.size()) != grid.cell_count()) {
    throw std::domain_error("steady_residual: density does not match grid");
  }
  if (velocity.comp.size() != static_cast<size_t>(grid.dim())) {
    throw std::domain_error("steady_residual: velocity dimension mismatch");
  }
  const auto& p = density.values;
  const auto face_flux = [&](const std::vector<double>& vc, size_t a, size_t b) {
    return std::max(vc[a], 0.0) * p[a] + std::min(vc[b], 0.0) * p[b];
  };
  std::vector<double> dpdt(p.size(), 0.0);
  if (grid.dim() == 1) {
    const size_t n = static_cast<size_t>(grid.dims[0].cells);
    const double inv_h = 1.0 / grid.dims[0].h;
    for (size_t f = 1; f < n; ++f) {
      const double flux = inv_h * face_flux(velocity.comp[0], f - 1, f);
      dpdt[f - 1] -= flux;
      dpdt[f] += flux;
    }
  } else {
    const size_t n0 = static_cast<size_t>(grid.dims[0].cells);
    const size_t n1 = static_cast<size_t>(grid.dims[1].cells);
    const double inv_h0 = 1.0 / grid.dims[0].h;
    const double inv_h1 = 1.0 / grid.dims[1].h;
    for (size_t i1 = 0; i1 < n1; ++i1) {
      for (size_t f = 1; f < n0; ++f) {
        const size_t a = (f - 1) + n0 * i1;
        const size_t b = f + n0 * i1;
        const double flux = inv_h0 * face_flux(velocity.comp[0], a, b);
        dpdt[a] -= flux;
        dpdt[b] += flux;
      }
    }
    for (size_t f = 1; f < n1; ++f) {
      for (size_t i0 = 0; i0 < n0; ++i0) {
        const size_t a = i0 + n0 * (f - 1);
        const size_t b = i0 + n0 * f;
        const double flux = inv_h1 * face_flux(velocity.comp[1], a, b);
        dpdt[a] -= flux;
        dpdt[b] += flux;
      }
    }
  }
  const double vol = grid.cell_volume();
  double res = 0.0;
  for (double v : dpdt) res += std::abs(v) * vol;
  return res;
}

ComparisonReport compare(const pde::Trace& pde_trace, const abm::Trace& abm_trace) {
  if (pde_trace.records.size() != abm_trace.records.size()) {
    throw std::domain_error("compare: traces have different lengths (" +
                            std::to_string(pde_trace.records.size()) + " vs " +
                            std::to_string(abm_trace.records.size()) + ")");
  }
  ComparisonReport report;
  const size_t n = pde_trace.records.size();
  report.t.reserve(n);
  report.pde_prob.reserve(n);
  report.abm_prob.reserve(n);
  report.gap.reserve(n);
  double gap_sum = 0.0;
  const double vol = pde_trace.grid.cell_volume();
  for (size_t i = 0; i < n; ++i) {
    const auto& pr = pde_trace.records[i];
    const auto& ar = abm_trace.records[i];
    if (pr.t != ar.t) {
      throw std::domain_error("compare: traces misaligned at index " + std::to_string(i));
    }
    const double gap = std::abs(pr.expected.fractions[0] - ar.mean_prob_a1);
    report.t.push_back(pr.t);
    report.pde_prob.push_back(pr.expected.fractions[0]);
    report.abm_prob.push_back(ar.mean_prob_a1);
    report.gap.push_back(gap);
    report.max_gap = std::max(report.max_gap, gap);
    gap_sum += gap;
    if (pr.snapshot && ar.histogram) {
      if (pr.snapshot->values.size() != ar.histogram->size()) {
        throw std::domain_error("compare: histogram and density snapshot sizes differ");
      }
      double l1 = 0.0;
      for (size_t c = 0; c < ar.histogram->size(); ++c) {
        l1 += std::abs((*ar.histogram)[c] - pr.snapshot->values[c] * vol);
      }
      report.hist_l1.emplace_back(pr.t, l1);
    }
  }
  report.mean_gap = n == 0 ? 0.0 : gap_sum / static_cast<double>(n);
  return report;
}

}  // namespace popdyn::analysis
