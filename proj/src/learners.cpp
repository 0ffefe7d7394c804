#include "popdyn/learners.hpp"

#include <stdexcept>
#include <string>

namespace popdyn::learners {

namespace {

void check_state(const LearnerSpec& spec, size_t dim) {
  if (dim != static_cast<size_t>(spec.state_dim())) {
    throw std::domain_error("learner state has dimension " + std::to_string(dim) +
                            ", expected " + std::to_string(spec.state_dim()));
  }
}

void check_rewards(const std::vector<double>& rewards) {
  if (rewards.size() != 2) {
    throw std::domain_error("expected 2 rewards, got " + std::to_string(rewards.size()));
  }
}

}  // namespace

void validate(const LearnerSpec& spec) {
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) {
    throw std::invalid_argument("learner: alpha " + std::to_string(spec.alpha) +
                                " outside (0, 1]");
  }
  if (spec.family == Family::QBoltzmann && !(spec.tau > 0.0)) {
    throw std::invalid_argument("learner: tau must be positive");
  }
}

PopulationProfile policy_of(const LearnerSpec& spec, const AgentState& state) {
  check_state(spec, state.x.size());
  if (spec.family == Family::QBoltzmann) {
    const double p0 = softmax1(spec.tau, state.x[0], state.x[1]);
    return PopulationProfile{{p0, 1.0 - p0}};
  }
  return PopulationProfile{{state.x[0], 1.0 - state.x[0]}};
}

AgentState apply_update(const LearnerSpec& spec, const AgentState& state, int chosen, double r,
                        const std::vector<double>* rewards) {
  check_state(spec, state.x.size());
  if (chosen < 0 || chosen >= 2) {
    throw std::domain_error("apply_update: action index " + std::to_string(chosen) +
                            " out of range for k=2");
  }
  AgentState next = state;
  switch (spec.family) {
    case Family::Cross:
      next.x[0] = cross_update(state.x[0], chosen, spec.alpha, r);
      break;
    case Family::QBoltzmann:
      next.x[static_cast<size_t>(chosen)] =
          q_update(state.x[static_cast<size_t>(chosen)], spec.alpha, r);
      break;
    case Family::IGA:
      if (rewards == nullptr) {
        throw std::domain_error("apply_update: IGA needs the full reward vector");
      }
      check_rewards(*rewards);
      next.x[0] = iga_update(state.x[0], spec.alpha, (*rewards)[0], (*rewards)[1]);
      break;
  }
  return next;
}

std::vector<double> drift(const LearnerSpec& spec, const std::vector<double>& x,
                          const std::vector<double>& rewards, double /*t*/) {
  check_state(spec, x.size());
  check_rewards(rewards);
  switch (spec.family) {
    case Family::Cross:
      return {cross_drift(x[0], spec.alpha, rewards[0], rewards[1])};
    case Family::QBoltzmann: {
      const double p0 = softmax1(spec.tau, x[0], x[1]);
      return {q_drift(p0, spec.alpha, rewards[0], x[0]),
              q_drift(1.0 - p0, spec.alpha, rewards[1], x[1])};
    }
    case Family::IGA:
      return {iga_drift(spec.alpha, rewards[0], rewards[1])};
  }
  throw std::domain_error("drift: unknown learner family");
}

}  // namespace popdyn::learners
