#include "popdyn/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace popdyn::pde {

namespace {

void check_density(const DensityField& density, const Grid& grid) {
  if (static_cast<std::int64_t>(density.values.size()) != grid.cell_count()) {
    throw std::domain_error("density has " + std::to_string(density.values.size()) +
                            " cells, grid has " + std::to_string(grid.cell_count()));
  }
}

void check_velocity(const VelocityField& velocity, const Grid& grid) {
  if (velocity.comp.size() != static_cast<size_t>(grid.dim())) {
    throw std::domain_error("velocity field dimension mismatch");
  }
  for (const auto& comp : velocity.comp) {
    if (static_cast<std::int64_t>(comp.size()) != grid.cell_count()) {
      throw std::domain_error("velocity component size does not match grid");
    }
  }
}

}  // namespace

std::int64_t Grid::cell_count() const {
  std::int64_t n = 1;
  for (const auto& d : dims) n *= d.cells;
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const auto& d : dims) v *= d.h;
  return v;
}

void validate(const Grid& grid) {
  if (grid.dims.empty() || grid.dims.size() > 2) {
    throw std::invalid_argument("grid: expected 1 or 2 dimensions, got " +
                                std::to_string(grid.dims.size()));
  }
  for (const auto& d : grid.dims) {
    if (!(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi)) {
      throw std::invalid_argument("grid: need finite lo < hi");
    }
    if (d.cells < 8) {
      throw std::invalid_argument("grid: need at least 8 cells, got " + std::to_string(d.cells));
    }
    if (static_cast<int>(d.centers.size()) != d.cells) {
      throw std::invalid_argument("grid: centers not initialized");
    }
  }
}

Grid make_uniform_grid(const std::vector<double>& lo, const std::vector<double>& hi,
                       const std::vector<int>& cells) {
  if (lo.size() != hi.size() || lo.size() != cells.size()) {
    throw std::invalid_argument("grid: bounds/cells length mismatch");
  }
  Grid grid;
  for (size_t j = 0; j < lo.size(); ++j) {
    GridDim d;
    d.lo = lo[j];
    d.hi = hi[j];
    d.cells = cells[j];
    if (cells[j] < 1) throw std::invalid_argument("grid: nonpositive cell count");
    d.h = (hi[j] - lo[j]) / cells[j];
    d.centers.resize(static_cast<size_t>(cells[j]));
    for (int i = 0; i < cells[j]; ++i) d.centers[static_cast<size_t>(i)] = d.lo + (i + 0.5) * d.h;
    grid.dims.push_back(std::move(d));
  }
  validate(grid);
  return grid;
}

Grid make_policy_grid(int cells) {
  if (cells < 8) throw std::invalid_argument("grid: need at least 8 cells");
  GridDim d;
  d.cells = cells;
  d.h = 1.0 / (cells - 1);
  d.lo = -0.5 * d.h;
  d.hi = 1.0 + 0.5 * d.h;
  d.centers.resize(static_cast<size_t>(cells));
  // i/(cells-1) puts the first and last centers at exactly 0 and 1.
  for (int i = 0; i < cells; ++i) {
    d.centers[static_cast<size_t>(i)] = static_cast<double>(i) / (cells - 1);
  }
  Grid grid{{d}};
  validate(grid);
  return grid;
}

Grid make_q_grid(const games::GameSpec& game, int cells_per_dim) {
  if (cells_per_dim < 8) throw std::invalid_argument("grid: need at least 8 cells");
  const auto [r_min, r_max] = games::reward_bounds(game);
  GridDim d;
  d.cells = cells_per_dim;
  d.h = (r_max - r_min + 0.2) / (cells_per_dim - 1);
  d.lo = (r_min - 0.1) - 0.5 * d.h;
  d.hi = (r_max + 0.1) + 0.5 * d.h;
  d.centers.resize(static_cast<size_t>(cells_per_dim));
  for (int i = 0; i < cells_per_dim; ++i) {
    d.centers[static_cast<size_t>(i)] = (r_min - 0.1) + i * d.h;
  }
  Grid grid{{d, d}};
  validate(grid);
  return grid;
}

Grid grid_for(const learners::LearnerSpec& spec, const games::GameSpec& game,
              const std::vector<int>& cells) {
  if (spec.family == learners::Family::QBoltzmann) {
    if (cells.size() != 2 || cells[0] != cells[1]) {
      throw std::invalid_argument("grid: Q-learning needs two equal cell counts");
    }
    return make_q_grid(game, cells[0]);
  }
  if (cells.size() != 1) {
    throw std::invalid_argument("grid: scalar-policy learners need one cell count");
  }
  return make_policy_grid(cells[0]);
}

double mass(const DensityField& density, const Grid& grid) {
  check_density(density, grid);
  double m = 0.0;
  for (double v : density.values) m += v;
  return m * grid.cell_volume();
}

double min_value(const DensityField& density) {
  double m = density.values.empty() ? 0.0 : density.values.front();
  for (double v : density.values) m = std::min(m, v);
  return m;
}

DensityField project_initial(const init_dist::InitialDistribution& dist, const Grid& grid) {
  validate(grid);
  init_dist::validate(dist);
  if (dist.dim() != grid.dim()) {
    throw std::domain_error("project_initial: distribution dimension " +
                            std::to_string(dist.dim()) + " does not match grid dimension " +
                            std::to_string(grid.dim()));
  }
  // Per-dimension cell masses from CDF differences at cell edges.
  std::vector<std::vector<double>> cell_mass(grid.dims.size());
  for (size_t j = 0; j < grid.dims.size(); ++j) {
    const auto& d = grid.dims[j];
    cell_mass[j].resize(static_cast<size_t>(d.cells));
    for (int i = 0; i < d.cells; ++i) {
      const double c = d.centers[static_cast<size_t>(i)];
      cell_mass[j][static_cast<size_t>(i)] =
          init_dist::cdf1(dist.components[j], c + 0.5 * d.h) -
          init_dist::cdf1(dist.components[j], c - 0.5 * d.h);
    }
  }
  DensityField out;
  out.t = 0.0;
  out.values.resize(static_cast<size_t>(grid.cell_count()));
  double total = 0.0;
  if (grid.dim() == 1) {
    for (size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] = cell_mass[0][i];
      total += out.values[i];
    }
  } else {
    const size_t n0 = static_cast<size_t>(grid.dims[0].cells);
    for (size_t i1 = 0; i1 < cell_mass[1].size(); ++i1) {
      for (size_t i0 = 0; i0 < n0; ++i0) {
        const double m = cell_mass[0][i0] * cell_mass[1][i1];
        out.values[i0 + n0 * i1] = m;
        total += m;
      }
    }
  }
  if (!(total > 0.0)) {
    throw std::domain_error("project_initial: distribution has no mass on the grid domain");
  }
  const double scale = 1.0 / (total * grid.cell_volume());
  for (double& v : out.values) v *= scale;
  return out;
}

PopulationProfile mean_profile(const DensityField& density, const Grid& grid,
                               const learners::LearnerSpec& spec) {
  check_density(density, grid);
  const double vol = grid.cell_volume();
  double frac = 0.0;
  if (spec.family == learners::Family::QBoltzmann) {
    if (grid.dim() != 2) throw std::domain_error("mean_profile: Q-learning needs a 2-D grid");
    const size_t n0 = static_cast<size_t>(grid.dims[0].cells);
    const size_t n1 = static_cast<size_t>(grid.dims[1].cells);
    for (size_t i1 = 0; i1 < n1; ++i1) {
      const double q1 = grid.dims[1].centers[i1];
      for (size_t i0 = 0; i0 < n0; ++i0) {
        frac += learners::softmax1(spec.tau, grid.dims[0].centers[i0], q1) *
                density.values[i0 + n0 * i1];
      }
    }
    frac *= vol;
  } else {
    if (grid.dim() != 1) throw std::domain_error("mean_profile: scalar policy needs a 1-D grid");
    for (size_t i = 0; i < density.values.size(); ++i) {
      frac += grid.dims[0].centers[i] * density.values[i];
    }
    frac *= vol;
  }
  frac = std::clamp(frac, 0.0, 1.0);
  return PopulationProfile{{frac, 1.0 - frac}};
}

VelocityField drift_field(const Grid& grid, const learners::LearnerSpec& spec,
                          const games::GameSpec& game, const PopulationProfile& profile,
                          double t) {
  validate(grid);
  const std::vector<double> rewards = games::reward_vector(game, profile, t);
  VelocityField v;
  if (spec.family == learners::Family::QBoltzmann) {
    if (grid.dim() != 2) throw std::domain_error("drift_field: Q-learning needs a 2-D grid");
    const size_t n0 = static_cast<size_t>(grid.dims[0].cells);
    const size_t n1 = static_cast<size_t>(grid.dims[1].cells);
    v.comp.assign(2, std::vector<double>(n0 * n1));
    for (size_t i1 = 0; i1 < n1; ++i1) {
      const double q1 = grid.dims[1].centers[i1];
      for (size_t i0 = 0; i0 < n0; ++i0) {
        const double q0 = grid.dims[0].centers[i0];
        const double p0 = learners::softmax1(spec.tau, q0, q1);
        const size_t c = i0 + n0 * i1;
        v.comp[0][c] = learners::q_drift(p0, spec.alpha, rewards[0], q0);
        v.comp[1][c] = learners::q_drift(1.0 - p0, spec.alpha, rewards[1], q1);
      }
    }
    return v;
  }
  if (grid.dim() != 1) throw std::domain_error("drift_field: scalar policy needs a 1-D grid");
  const size_t n = static_cast<size_t>(grid.dims[0].cells);
  v.comp.assign(1, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    const double x = grid.dims[0].centers[i];
    v.comp[0][i] = spec.family == learners::Family::Cross
                       ? learners::cross_drift(x, spec.alpha, rewards[0], rewards[1])
                       : learners::iga_drift(spec.alpha, rewards[0], rewards[1]);
  }
  return v;
}

DensityField advect_step(const DensityField& density, const VelocityField& velocity,
                         const Grid& grid, double dt) {
  check_density(density, grid);
  check_velocity(velocity, grid);
  if (!(dt > 0.0)) throw std::runtime_error("advect_step: dt must be positive");
  for (int j = 0; j < grid.dim(); ++j) {
    double vmax = 0.0;
    for (double v : velocity.comp[static_cast<size_t>(j)]) vmax = std::max(vmax, std::abs(v));
    const double cfl = vmax * dt / grid.dims[static_cast<size_t>(j)].h;
    if (cfl > 1.0 + 1e-12) {
      throw std::runtime_error("advect_step: dt=" + std::to_string(dt) +
                               " violates the CFL bound in dimension " + std::to_string(j) +
                               " (CFL=" + std::to_string(cfl) + ")");
    }
  }

  DensityField out = density;
  out.t = density.t + dt;
  const auto& p = density.values;

  // Donor-cell flux at the face between cells a (left) and b (right); domain
  // boundary faces carry zero flux.
  const auto face_flux = [&](const std::vector<double>& vc, size_t a, size_t b) {
    return std::max(vc[a], 0.0) * p[a] + std::min(vc[b], 0.0) * p[b];
  };

  // The update is nonnegative in exact arithmetic (outflow <= CFL * p_i), but
  // once a decaying tail reaches the denormal range, rounding is absolute
  // rather than relative and can land a hair below zero. Flush only that
  // scale; a genuine positivity violation would be many orders larger.
  const auto flush_roundoff_negatives = [](std::vector<double>& values) {
    for (double& v : values) {
      if (v < 0.0 && v > -1e-250) v = 0.0;
    }
  };

  if (grid.dim() == 1) {
    const size_t n = static_cast<size_t>(grid.dims[0].cells);
    const double s = dt / grid.dims[0].h;
    for (size_t f = 1; f < n; ++f) {
      const double flux = s * face_flux(velocity.comp[0], f - 1, f);
      out.values[f - 1] -= flux;
      out.values[f] += flux;
    }
    flush_roundoff_negatives(out.values);
    return out;
  }

  const size_t n0 = static_cast<size_t>(grid.dims[0].cells);
  const size_t n1 = static_cast<size_t>(grid.dims[1].cells);
  const double s0 = dt / grid.dims[0].h;
  const double s1 = dt / grid.dims[1].h;
  for (size_t i1 = 0; i1 < n1; ++i1) {
    for (size_t f = 1; f < n0; ++f) {
      const size_t a = (f - 1) + n0 * i1;
      const size_t b = f + n0 * i1;
      const double flux = s0 * face_flux(velocity.comp[0], a, b);
      out.values[a] -= flux;
      out.values[b] += flux;
    }
  }
  for (size_t f = 1; f < n1; ++f) {
    for (size_t i0 = 0; i0 < n0; ++i0) {
      const size_t a = i0 + n0 * (f - 1);
      const size_t b = i0 + n0 * f;
      const double flux = s1 * face_flux(velocity.comp[1], a, b);
      out.values[a] -= flux;
      out.values[b] += flux;
    }
  }
  flush_roundoff_negatives(out.values);
  return out;
}

Trace solve(const games::GameSpec& game, const learners::LearnerSpec& spec,
            const init_dist::InitialDistribution& init, const Grid& grid, int horizon,
            const SolveOptions& options) {
  games::validate(game);
  learners::validate(spec);
  if (horizon < 0) throw std::invalid_argument("solve: negative horizon");
  if (options.min_substeps < 1) throw std::invalid_argument("solve: min_substeps must be >= 1");
  for (int ts : options.snapshot_times) {
    if (ts < 0 || ts > horizon) {
      throw std::invalid_argument("solve: snapshot time " + std::to_string(ts) +
                                  " outside [0, horizon]");
    }
  }

  DensityField p = project_initial(init, grid);
  Trace trace;
  trace.grid = grid;
  trace.records.reserve(static_cast<size_t>(horizon) + 1);

  const auto want_snapshot = [&](int t) {
    for (int ts : options.snapshot_times) {
      if (ts == t) return true;
    }
    return false;
  };

  for (int t = 0; t <= horizon; ++t) {
    p.t = t;
    TraceRecord rec;
    rec.t = t;
    rec.expected = mean_profile(p, grid, spec);
    rec.mass = mass(p, grid);
    rec.min_value = min_value(p);
    if (want_snapshot(t)) rec.snapshot = p;
    trace.records.push_back(std::move(rec));
    if (t == horizon) break;

    // Freeze the mean-field coupling for one unit of time, then substep.
    const VelocityField v =
        drift_field(grid, spec, game, trace.records.back().expected, static_cast<double>(t));
    double rate = 0.0;
    for (int j = 0; j < grid.dim(); ++j) {
      double vmax = 0.0;
      for (double vv : v.comp[static_cast<size_t>(j)]) vmax = std::max(vmax, std::abs(vv));
      rate += vmax / grid.dims[static_cast<size_t>(j)].h;
    }
    int nsub = std::max(options.min_substeps, 1);
    if (rate > 0.0) nsub = std::max(nsub, static_cast<int>(std::ceil(rate / 0.9)));
    const double dt = 1.0 / nsub;
    for (int s = 0; s < nsub; ++s) p = advect_step(p, v, grid, dt);
  }
  return trace;
}

}  // namespace popdyn::pde
