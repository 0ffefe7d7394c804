#pragma once

#include <variant>
#include <vector>

#include "popdyn/rng.hpp"

namespace popdyn::init_dist {

struct TruncNormal {
  double mu;
  double sigma;
  double lo;
  double hi;
};

// Support [0, 1].
struct Beta {
  double a;
  double b;
};

using Component = std::variant<TruncNormal, Beta>;

// One component per state coordinate: a single entry for scalar states, a
// product of independent one-dimensional distributions for Q-vectors.
struct InitialDistribution {
  std::vector<Component> components;

  int dim() const { return static_cast<int>(components.size()); }

  static InitialDistribution trunc_normal(double mu, double sigma, double lo, double hi);
  static InitialDistribution beta(double a, double b);
  static InitialDistribution product(std::vector<Component> comps);
};

void validate(const InitialDistribution& dist);

double pdf1(const Component& comp, double x);
double cdf1(const Component& comp, double x);
double sample1(const Component& comp, rng::Stream& rs);

double pdf(const InitialDistribution& dist, const std::vector<double>& x);
std::vector<double> sample(const InitialDistribution& dist, rng::Stream& rs);

// Regularized incomplete beta I_x(a, b); exposed for cell-averaged projections.
double reg_inc_beta(double a, double b, double x);
double normal_cdf(double z);

}  // namespace popdyn::init_dist
