#pragma once

#include <vector>

namespace popdyn {

// Point on the k-simplex: fraction of the population playing each action.
struct PopulationProfile {
  std::vector<double> fractions;

  int k() const { return static_cast<int>(fractions.size()); }
};

// Throws std::domain_error if entries leave [0, 1] or the sum drifts from 1 by
// more than 1e-12.
void validate(const PopulationProfile& profile);

}  // namespace popdyn
