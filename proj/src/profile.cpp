#include "popdyn/profile.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace popdyn {

void validate(const PopulationProfile& profile) {
  if (profile.fractions.empty()) {
    throw std::domain_error("profile: no entries");
  }
  double sum = 0.0;
  for (double f : profile.fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::domain_error("profile: entry " + std::to_string(f) + " outside [0, 1]");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::domain_error("profile: entries sum to " + std::to_string(sum) + ", not 1");
  }
}

}  // namespace popdyn
