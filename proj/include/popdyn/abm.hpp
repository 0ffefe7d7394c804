#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "popdyn/games.hpp"
#include "popdyn/init_dist.hpp"
#include "popdyn/learners.hpp"
#include "popdyn/pde.hpp"

namespace popdyn::abm {

struct Population {
  std::vector<learners::AgentState> states;
  learners::LearnerSpec spec;
  std::uint64_t rng_seed = 0;
  // Per-agent RNG substream ids; default is the agent index. Carried alongside
  // the states so that permuting agents (with their streams) is observationally
  // neutral.
  std::vector<std::uint64_t> stream_ids;
};

struct RoundRecord {
  double t = 0.0;
  double mean_prob_a1 = 0.0;          // mean policy before updating
  PopulationProfile realized;          // profile of the sampled actions
  std::optional<std::vector<double>> histogram;  // state fractions per grid cell
};

struct Trace {
  std::vector<RoundRecord> records;
};

/// Sample n i.i.d. agent states from the initial distribution; deterministic in
/// (n, init, seed).
Population init_population(int n, const learners::LearnerSpec& spec,
                           const init_dist::InitialDistribution& init, std::uint64_t seed);

/// One synchronous round at time t: every agent samples an action from its own
/// policy, the realized profile prices the rewards, and every agent updates.
std::pair<Population, RoundRecord> step(const Population& pop, const games::GameSpec& game,
                                        double t);

// Fraction of agents per grid cell (states binned at cell centers).
std::vector<double> state_histogram(const Population& pop, const pde::Grid& grid);

/// Simulate horizon rounds; the trace has horizon+1 records (t = 0 included;
/// the final record samples actions without updating). Histograms are attached
/// on `histogram_grid` at the times in `histogram_times` (all records if null).
Trace run(const games::GameSpec& game, const learners::LearnerSpec& spec,
          const init_dist::InitialDistribution& init, int n, int horizon, std::uint64_t seed,
          const pde::Grid* histogram_grid = nullptr,
          const std::vector<int>* histogram_times = nullptr);

/// Average `runs` independent traces; run r uses seed base_seed + r. Runs
/// execute concurrently (capped by POPDYN_THREADS) with a fixed-order reduction,
/// so results are bit-stable regardless of thread count.
Trace run_ensemble(const games::GameSpec& game, const learners::LearnerSpec& spec,
                   const init_dist::InitialDistribution& init, int n, int horizon, int runs,
                   std::uint64_t base_seed, const pde::Grid* histogram_grid = nullptr,
                   const std::vector<int>* histogram_times = nullptr);

}  // namespace popdyn::abm
