#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "popdyn/games.hpp"
#include "popdyn/init_dist.hpp"
#include "popdyn/learners.hpp"

namespace popdyn::pde {

struct GridDim {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 0;
  double h = 0.0;
  std::vector<double> centers;
};

// Cell-centered uniform grid, 1-D or 2-D. Cells are flattened with dimension 0
// fastest: index = i0 + cells0 * i1.
struct Grid {
  std::vector<GridDim> dims;

  int dim() const { return static_cast<int>(dims.size()); }
  std::int64_t cell_count() const;
  double cell_volume() const;
};

void validate(const Grid& grid);

Grid make_uniform_grid(const std::vector<double>& lo, const std::vector<double>& hi,
                       const std::vector<int>& cells);

// Policy grid for Cross/IGA: cell centers at i/(cells-1) span [0, 1] exactly,
// so the absorbing endpoints sit on centers and the boundary drift is a true
// floating-point zero.
Grid make_policy_grid(int cells);

// Q-value grid: centers span [r_min - 0.1, r_max + 0.1] per dimension; the
// margin absorbs initial mass since the drift points inward toward [r_min, r_max].
Grid make_q_grid(const games::GameSpec& game, int cells_per_dim);

Grid grid_for(const learners::LearnerSpec& spec, const games::GameSpec& game,
              const std::vector<int>& cells);

// Cell-averaged density values; unit mass under sum(value * cell volume).
struct DensityField {
  std::vector<double> values;
  double t = 0.0;
};

double mass(const DensityField& density, const Grid& grid);
double min_value(const DensityField& density);

// Drift velocity sampled at cell centers, one vector of cell values per dimension.
struct VelocityField {
  std::vector<std::vector<double>> comp;
};

/// Project an initial distribution onto the grid by exact cell averages (CDF
/// differences), renormalized to unit mass.
DensityField project_initial(const init_dist::InitialDistribution& dist, const Grid& grid);

/// Mean-field closure: the population profile implied by a density over
/// critical parameters.
PopulationProfile mean_profile(const DensityField& density, const Grid& grid,
                               const learners::LearnerSpec& spec);

/// Learner drift evaluated on the grid for a frozen profile.
VelocityField drift_field(const Grid& grid, const learners::LearnerSpec& spec,
                          const games::GameSpec& game, const PopulationProfile& profile, double t);

/// One explicit conservative donor-cell upwind step with zero-flux boundaries.
/// Throws if dt violates the per-dimension CFL bound.
DensityField advect_step(const DensityField& density, const VelocityField& velocity,
                         const Grid& grid, double dt);

struct SolveOptions {
  std::vector<int> snapshot_times;  // integer times whose densities are kept
  int min_substeps = 1;             // floor on CFL substeps per unit time
};

struct TraceRecord {
  double t = 0.0;
  PopulationProfile expected;
  double mass = 0.0;
  double min_value = 0.0;
  std::optional<DensityField> snapshot;
};

struct Trace {
  Grid grid;
  std::vector<TraceRecord> records;
};

/// March the advection equation over [0, horizon], refreshing the mean-field
/// profile once per unit time and substepping to keep the CFL number <= 0.9.
Trace solve(const games::GameSpec& game, const learners::LearnerSpec& spec,
            const init_dist::InitialDistribution& init, const Grid& grid, int horizon,
            const SolveOptions& options = {});

}  // namespace popdyn::pde
