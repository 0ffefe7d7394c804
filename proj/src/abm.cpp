#include "popdyn/abm.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace popdyn::abm {

namespace {

double policy_p1(const learners::LearnerSpec& spec, const learners::AgentState& st) {
  if (spec.family == learners::Family::QBoltzmann) {
    return learners::softmax1(spec.tau, st.x[0], st.x[1]);
  }
  return st.x[0];
}

// One synchronous round over a mutable population. Updates are applied only
// when `update` is set (the final trace record samples without updating).
RoundRecord round_in_place(Population& pop, const games::GameSpec& game, double t, bool update,
                           std::vector<int>& actions) {
  const size_t n = pop.states.size();
  actions.resize(n);
  double prob_sum = 0.0;
  const auto round_id = static_cast<std::uint64_t>(std::llround(t));
  for (size_t i = 0; i < n; ++i) {
    const double p1 = policy_p1(pop.spec, pop.states[i]);
    prob_sum += p1;
    rng::Stream rs{pop.rng_seed, pop.stream_ids[i], round_id, 0};
    actions[i] = rs.u01() < p1 ? 0 : 1;
  }
  RoundRecord rec;
  rec.t = t;
  rec.mean_prob_a1 = prob_sum / static_cast<double>(n);
  rec.realized = games::profile_from_actions(actions, 2);
  if (update) {
    const std::vector<double> rv = games::reward_vector(game, rec.realized, t);
    const double alpha = pop.spec.alpha;
    switch (pop.spec.family) {
      case learners::Family::Cross:
        for (size_t i = 0; i < n; ++i) {
          double& x = pop.states[i].x[0];
          x = learners::cross_update(x, actions[i], alpha, rv[static_cast<size_t>(actions[i])]);
        }
        break;
      case learners::Family::QBoltzmann:
        for (size_t i = 0; i < n; ++i) {
          double& q = pop.states[i].x[static_cast<size_t>(actions[i])];
          q = learners::q_update(q, alpha, rv[static_cast<size_t>(actions[i])]);
        }
        break;
      case learners::Family::IGA:
        for (size_t i = 0; i < n; ++i) {
          double& x = pop.states[i].x[0];
          x = learners::iga_update(x, alpha, rv[0], rv[1]);
        }
        break;
    }
  }
  return rec;
}

unsigned worker_count(int runs) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("POPDYN_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < workers) workers = static_cast<unsigned>(cap);
  }
  return std::min(workers, static_cast<unsigned>(runs));
}

}  // namespace

Population init_population(int n, const learners::LearnerSpec& spec,
                           const init_dist::InitialDistribution& init, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("init_population: need at least one agent");
  learners::validate(spec);
  init_dist::validate(init);
  if (init.dim() != spec.state_dim()) {
    throw std::domain_error("init_population: distribution dimension " +
                            std::to_string(init.dim()) + " does not match state dimension " +
                            std::to_string(spec.state_dim()));
  }
  Population pop;
  pop.spec = spec;
  pop.rng_seed = seed;
  pop.states.resize(static_cast<size_t>(n));
  pop.stream_ids.resize(static_cast<size_t>(n));
  for (size_t i = 0; i < pop.states.size(); ++i) {
    pop.stream_ids[i] = static_cast<std::uint64_t>(i);
    rng::Stream rs{seed, pop.stream_ids[i], rng::kInitRound, 0};
    pop.states[i].x = init_dist::sample(init, rs);
  }
  return pop;
}

std::pair<Population, RoundRecord> step(const Population& pop, const games::GameSpec& game,
                                        double t) {
  Population next = pop;
  std::vector<int> actions;
  RoundRecord rec = round_in_place(next, game, t, true, actions);
  return {std::move(next), std::move(rec)};
}

std::vector<double> state_histogram(const Population& pop, const pde::Grid& grid) {
  pde::validate(grid);
  if (grid.dim() != pop.spec.state_dim()) {
    throw std::domain_error("state_histogram: grid dimension does not match state dimension");
  }
  std::vector<double> hist(static_cast<size_t>(grid.cell_count()), 0.0);
  const auto bin = [](const pde::GridDim& d, double x) {
    auto i = static_cast<std::int64_t>(std::llround((x - d.centers[0]) / d.h));
    return std::clamp<std::int64_t>(i, 0, d.cells - 1);
  };
  for (const auto& st : pop.states) {
    std::int64_t c = bin(grid.dims[0], st.x[0]);
    if (grid.dim() == 2) c += grid.dims[0].cells * bin(grid.dims[1], st.x[1]);
    hist[static_cast<size_t>(c)] += 1.0;
  }
  const double n = static_cast<double>(pop.states.size());
  for (double& v : hist) v /= n;
  return hist;
}

Trace run(const games::GameSpec& game, const learners::LearnerSpec& spec,
          const init_dist::InitialDistribution& init, int n, int horizon, std::uint64_t seed,
          const pde::Grid* histogram_grid, const std::vector<int>* histogram_times) {
  games::validate(game);
  if (horizon < 0) throw std::invalid_argument("run: negative horizon");
  Population pop = init_population(n, spec, init, seed);
  const auto want_histogram = [&](int t) {
    if (histogram_grid == nullptr) return false;
    if (histogram_times == nullptr) return true;
    for (int ts : *histogram_times) {
      if (ts == t) return true;
    }
    return false;
  };
  Trace trace;
  trace.records.reserve(static_cast<size_t>(horizon) + 1);
  std::vector<int> actions;
  for (int t = 0; t <= horizon; ++t) {
    std::optional<std::vector<double>> hist;
    if (want_histogram(t)) hist = state_histogram(pop, *histogram_grid);
    RoundRecord rec = round_in_place(pop, game, static_cast<double>(t), t < horizon, actions);
    rec.histogram = std::move(hist);
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

Trace run_ensemble(const games::GameSpec& game, const learners::LearnerSpec& spec,
                   const init_dist::InitialDistribution& init, int n, int horizon, int runs,
                   std::uint64_t base_seed, const pde::Grid* histogram_grid,
                   const std::vector<int>* histogram_times) {
  if (runs < 1) throw std::invalid_argument("run_ensemble: need at least one run");
  std::vector<Trace> slots(static_cast<size_t>(runs));
  std::atomic<int> next{0};
  const auto work = [&]() {
    for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) {
      slots[static_cast<size_t>(r)] =
          run(game, spec, init, n, horizon, base_seed + static_cast<std::uint64_t>(r),
              histogram_grid, histogram_times);
    }
  };
  const unsigned workers = worker_count(runs);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction keeps the average bit-stable across thread counts.
  Trace avg = slots.front();
  const double inv_runs = 1.0 / runs;
  for (size_t t = 0; t < avg.records.size(); ++t) {
    auto& rec = avg.records[t];
    for (int r = 1; r < runs; ++r) {
      const auto& other = slots[static_cast<size_t>(r)].records[t];
      rec.mean_prob_a1 += other.mean_prob_a1;
      for (size_t j = 0; j < rec.realized.fractions.size(); ++j) {
        rec.realized.fractions[j] += other.realized.fractions[j];
      }
      if (rec.histogram) {
        for (size_t c = 0; c < rec.histogram->size(); ++c) {
          (*rec.histogram)[c] += (*other.histogram)[c];
        }
      }
    }
    rec.mean_prob_a1 *= inv_runs;
    for (double& f : rec.realized.fractions) f *= inv_runs;
    if (rec.histogram) {
      for (double& v : *rec.histogram) v *= inv_runs;
    }
  }
  return avg;
}

}  // namespace popdyn::abm
