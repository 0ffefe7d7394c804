#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "popdyn/profile.hpp"

namespace popdyn::learners {

enum class Family { Cross, QBoltzmann, IGA };

struct LearnerSpec {
  Family family = Family::Cross;
  double alpha = 0.05;  // Cross conventionally uses 0.01
  double tau = 2.0;     // QBoltzmann only

  int state_dim() const { return family == Family::QBoltzmann ? 2 : 1; }
};

// Per-agent critical parameters: pi_1 for Cross/IGA, the Q-vector for QBoltzmann.
struct AgentState {
  std::vector<double> x;
};

void validate(const LearnerSpec& spec);

// Scalar update kernels shared by the per-agent simulator and the drift field.

inline double softmax1(double tau, double q0, double q1) {
  const double m = std::max(q0, q1);
  const double e0 = std::exp(tau * (q0 - m));
  const double e1 = std::exp(tau * (q1 - m));
  return e0 / (e0 + e1);
}

inline double cross_update(double pi1, int chosen, double alpha, double r) {
  const double next = chosen == 0 ? pi1 + alpha * r * (1.0 - pi1)  //
                                  : pi1 * (1.0 - alpha * r);
  return std::clamp(next, 0.0, 1.0);
}

inline double q_update(double q, double alpha, double r) { return q + alpha * (r - q); }

inline double iga_update(double pi1, double alpha, double r0, double r1) {
  return std::clamp(pi1 + alpha * (r0 - r1), 0.0, 1.0);
}

inline double cross_drift(double pi1, double alpha, double r0, double r1) {
  return alpha * pi1 * (1.0 - pi1) * (r0 - r1);
}

inline double q_drift(double pi_i, double alpha, double r_i, double q_i) {
  return alpha * pi_i * (r_i - q_i);
}

inline double iga_drift(double alpha, double r0, double r1) { return alpha * (r0 - r1); }

/// Action probabilities implied by a state: identity for Cross/IGA, Boltzmann
/// softmax (with max shift) for QBoltzmann.
PopulationProfile policy_of(const LearnerSpec& spec, const AgentState& state);

/// One discrete learning step. `rewards` is required (and only used) by IGA,
/// which updates from the full reward vector.
AgentState apply_update(const LearnerSpec& spec, const AgentState& state, int chosen, double r,
                        const std::vector<double>* rewards = nullptr);

/// Continuous-time drift of the critical parameters, i.e. the expected
/// one-round change at state x under per-action rewards.
std::vector<double> drift(const LearnerSpec& spec, const std::vector<double>& x,
                          const std::vector<double>& rewards, double t);

}  // namespace popdyn::learners
