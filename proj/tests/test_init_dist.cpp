#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "popdyn/init_dist.hpp"

using namespace popdyn;
using init_dist::Beta;
using init_dist::Component;
using init_dist::InitialDistribution;
using init_dist::TruncNormal;

namespace {

// Tanh-sinh quadrature on (lo, hi); handles integrable endpoint singularities
// (Beta with shape < 1), which plain Gauss rules do not. The integrand gets
// the distances to both endpoints, computed without cancellation, so it can
// evaluate x^(a-1)-style factors right up against the boundary.
double integrate(const std::function<double(double, double, double)>& f, double lo, double hi) {
  const double r = 0.5 * (hi - lo);
  const double step = 1e-2;
  double sum = 0.0;
  for (int i = -500; i <= 500; ++i) {
    const double u = i * step;
    const double z = 0.5 * std::numbers::pi * std::sinh(u);
    const double w = 0.5 * std::numbers::pi * std::cosh(u) / std::pow(std::cosh(z), 2);
    if (w == 0.0) continue;
    const double d_lo = 2.0 * r / (std::exp(-2.0 * z) + 1.0);  // r * (1 + tanh z)
    const double d_hi = 2.0 * r / (std::exp(2.0 * z) + 1.0);   // r * (1 - tanh z)
    if (d_lo == 0.0 || d_hi == 0.0) continue;
    sum += w * f(lo + d_lo, d_lo, d_hi);
  }
  return sum * r * step;
}

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  return integrate([&](double x, double, double) { return f(x); }, lo, hi);
}

}  // namespace

TEST_CASE("normal_cdf reference values") {
  CHECK(init_dist::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(init_dist::normal_cdf(1.96) == doctest::Approx(0.975002104851780).epsilon(1e-12));
  CHECK(init_dist::normal_cdf(-1.0) + init_dist::normal_cdf(1.0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(init_dist::normal_cdf(-40.0) == 0.0);
  CHECK(init_dist::normal_cdf(40.0) == 1.0);
}

TEST_CASE("regularized incomplete beta identities") {
  CHECK(init_dist::reg_inc_beta(0.4, 0.4, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  for (double x : {0.05, 0.3, 0.8}) {
    CHECK(init_dist::reg_inc_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-13));
    CHECK(init_dist::reg_inc_beta(2.0, 1.0, x) == doctest::Approx(x * x).epsilon(1e-13));
    // I_x(a,b) + I_{1-x}(b,a) == 1
    CHECK(init_dist::reg_inc_beta(0.4, 2.3, x) + init_dist::reg_inc_beta(2.3, 0.4, 1.0 - x) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(init_dist::reg_inc_beta(0.4, 0.4, 0.0) == 0.0);
  CHECK(init_dist::reg_inc_beta(0.4, 0.4, 1.0) == 1.0);
  CHECK_THROWS_AS(init_dist::reg_inc_beta(0.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("truncated normal pdf/cdf") {
  const Component tn = TruncNormal{0.5, 0.1, 0.0, 1.0};
  CHECK(init_dist::pdf1(tn, -0.01) == 0.0);
  CHECK(init_dist::pdf1(tn, 1.01) == 0.0);
  CHECK(init_dist::cdf1(tn, 0.0) == 0.0);
  CHECK(init_dist::cdf1(tn, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(init_dist::cdf1(tn, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  // Symmetry about the mean.
  CHECK(init_dist::pdf1(tn, 0.3) == doctest::Approx(init_dist::pdf1(tn, 0.7)).epsilon(1e-13));
  // Normalization, and pdf consistent with cdf.
  const double total = integrate([&](double x) { return init_dist::pdf1(tn, x); }, 0.0, 1.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  const double part = integrate([&](double x) { return init_dist::pdf1(tn, x); }, 0.1, 0.62);
  CHECK(part ==
        doctest::Approx(init_dist::cdf1(tn, 0.62) - init_dist::cdf1(tn, 0.1)).epsilon(1e-10));
}

TEST_CASE("beta pdf matches the gamma-function formula") {
  const Component be = Beta{0.4, 0.4};
  const double log_b = 2.0 * std::lgamma(0.4) - std::lgamma(0.8);
  const double expect = std::exp(-0.6 * std::log(0.5) - 0.6 * std::log(0.5) - log_b);
  CHECK(init_dist::pdf1(be, 0.5) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(init_dist::pdf1(be, -0.1) == 0.0);
  CHECK(init_dist::pdf1(be, 1.1) == 0.0);
  // U-shape: mass piles at the endpoints.
  CHECK(init_dist::pdf1(be, 0.02) > init_dist::pdf1(be, 0.5));
  // Normalization despite the endpoint singularities; the density is evaluated
  // from the endpoint distances so the quadrature sees the full spikes.
  const double total = integrate(
      [&](double, double dlo, double dhi) {
        return std::exp(-0.6 * std::log(dlo) - 0.6 * std::log(dhi) - log_b);
      },
      0.0, 1.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(init_dist::cdf1(be, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic per stream") {
  const Component tn = TruncNormal{0.5, 0.1, 0.0, 1.0};
  rng::Stream a{42, 7, rng::kInitRound, 0};
  rng::Stream b{42, 7, rng::kInitRound, 0};
  for (int i = 0; i < 32; ++i) {
    CHECK(init_dist::sample1(tn, a) == init_dist::sample1(tn, b));
  }
  rng::Stream c{43, 7, rng::kInitRound, 0};
  CHECK(init_dist::sample1(tn, a) != init_dist::sample1(tn, c));
}

TEST_CASE("sample moments and support") {
  const int n = 100000;
  SUBCASE("truncated normal") {
    const Component tn = TruncNormal{0.5, 0.1, 0.0, 1.0};
    rng::Stream rs{7, 0, rng::kInitRound, 0};
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = init_dist::sample1(tn, rs);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
      sum += x;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  }
  SUBCASE("beta") {
    const Component be = Beta{0.4, 0.4};
    rng::Stream rs{8, 0, rng::kInitRound, 0};
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = init_dist::sample1(be, rs);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 1.0);
      sum += x;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("samples follow the cdf (Kolmogorov-Smirnov)") {
  const int n = 100000;
  const Component comps[] = {Component{TruncNormal{0.5, 0.1, 0.0, 1.0}},
                             Component{TruncNormal{0.2, 0.3, 0.0, 1.0}}, Component{Beta{0.4, 0.4}},
                             Component{Beta{2.0, 5.0}}};
  std::uint64_t stream = 0;
  for (const Component& comp : comps) {
    rng::Stream rs{99, stream++, rng::kInitRound, 0};
    std::vector<double> xs(n);
    for (double& x : xs) x = init_dist::sample1(comp, rs);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = init_dist::cdf1(comp, xs[i]);
      d = std::max(d, std::abs(f - (i + 1.0) / n));
      d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    // 1.63 / sqrt(n) is the 1% critical value.
    CHECK(d * std::sqrt(static_cast<double>(n)) < 1.63);
  }
}

TEST_CASE("products combine independent coordinates") {
  const auto dist = InitialDistribution::product(
      {TruncNormal{0.0, 0.1, 0.0, 2.0}, TruncNormal{0.5, 0.1, 0.0, 2.0}});
  CHECK(dist.dim() == 2);
  const std::vector<double> pt{0.1, 0.55};
  CHECK(init_dist::pdf(dist, pt) ==
        doctest::Approx(init_dist::pdf1(dist.components[0], 0.1) *
                        init_dist::pdf1(dist.components[1], 0.55))
            .epsilon(1e-15));
  rng::Stream rs{5, 0, rng::kInitRound, 0};
  const auto x = init_dist::sample(dist, rs);
  REQUIRE(x.size() == 2);
  CHECK(x[0] >= 0.0);
  CHECK(x[1] <= 2.0);
  CHECK_THROWS_AS(init_dist::pdf(dist, {0.5}), std::domain_error);
}

TEST_CASE("rejection sampling gives up on vanishing acceptance regions") {
  // [0.9, 1.0] sits 90 sigma out; no draw will ever land.
  const Component hopeless = TruncNormal{0.0, 0.01, 0.9, 1.0};
  rng::Stream rs{1, 0, rng::kInitRound, 0};
  CHECK_THROWS_AS(init_dist::sample1(hopeless, rs), std::runtime_error);
}

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(init_dist::validate(InitialDistribution::trunc_normal(0.5, 0.1, 0.0, 1.0)));
  CHECK_THROWS_AS(init_dist::validate(InitialDistribution::trunc_normal(0.5, 0.0, 0.0, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(init_dist::validate(InitialDistribution::trunc_normal(0.5, 0.1, 1.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(init_dist::validate(InitialDistribution::beta(0.0, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(init_dist::validate(InitialDistribution::beta(1.0, -1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(init_dist::validate(InitialDistribution{{}}), std::invalid_argument);
}
