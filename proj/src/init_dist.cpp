#include "popdyn/init_dist.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace popdyn::init_dist {

namespace {

constexpr int kRejectionCap = 1000000;

double sq(double x) { return x * x; }

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr double eps = 3e-16;
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Marsaglia-Tsang gamma sampler, with the standard boost for shape < 1.
double gamma_draw(double shape, rng::Stream& rs) {
  if (shape < 1.0) {
    const double u = 1.0 - rs.u01();  // (0, 1]
    return gamma_draw(shape + 1.0, rs) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (int it = 0; it < kRejectionCap; ++it) {
    const double x = rs.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = 1.0 - rs.u01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
  throw std::runtime_error("sample: gamma rejection cap exceeded");
}

void validate1(const Component& comp) {
  if (const auto* tn = std::get_if<TruncNormal>(&comp)) {
    if (!(tn->sigma > 0.0)) throw std::invalid_argument("init: sigma must be positive");
    if (!(tn->lo < tn->hi)) throw std::invalid_argument("init: need lo < hi");
    if (!std::isfinite(tn->mu) || !std::isfinite(tn->lo) || !std::isfinite(tn->hi)) {
      throw std::invalid_argument("init: non-finite truncated-normal parameter");
    }
  } else {
    const auto& be = std::get<Beta>(comp);
    if (!(be.a > 0.0 && be.b > 0.0)) throw std::invalid_argument("init: beta shapes must be positive");
  }
}

}  // namespace

InitialDistribution InitialDistribution::trunc_normal(double mu, double sigma, double lo, double hi) {
  return InitialDistribution{{TruncNormal{mu, sigma, lo, hi}}};
}

InitialDistribution InitialDistribution::beta(double a, double b) {
  return InitialDistribution{{Beta{a, b}}};
}

InitialDistribution InitialDistribution::product(std::vector<Component> comps) {
  return InitialDistribution{std::move(comps)};
}

void validate(const InitialDistribution& dist) {
  if (dist.components.empty()) {
    throw std::invalid_argument("init: no components");
  }
  for (const auto& comp : dist.components) validate1(comp);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("reg_inc_beta: shapes must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double pdf1(const Component& comp, double x) {
  if (const auto* tn = std::get_if<TruncNormal>(&comp)) {
    if (x < tn->lo || x > tn->hi) return 0.0;
    const double zx = (x - tn->mu) / tn->sigma;
    const double mass = normal_cdf((tn->hi - tn->mu) / tn->sigma) -
                        normal_cdf((tn->lo - tn->mu) / tn->sigma);
    const double phi = std::exp(-0.5 * sq(zx)) / (tn->sigma * std::sqrt(2.0 * std::numbers::pi));
    return phi / mass;
  }
  const auto& be = std::get<Beta>(comp);
  if (x < 0.0 || x > 1.0) return 0.0;
  return std::pow(x, be.a - 1.0) * std::pow(1.0 - x, be.b - 1.0) /
         std::exp(log_beta(be.a, be.b));
}

double cdf1(const Component& comp, double x) {
  if (const auto* tn = std::get_if<TruncNormal>(&comp)) {
    if (x <= tn->lo) return 0.0;
    if (x >= tn->hi) return 1.0;
    const double lo_cdf = normal_cdf((tn->lo - tn->mu) / tn->sigma);
    const double hi_cdf = normal_cdf((tn->hi - tn->mu) / tn->sigma);
    return (normal_cdf((x - tn->mu) / tn->sigma) - lo_cdf) / (hi_cdf - lo_cdf);
  }
  const auto& be = std::get<Beta>(comp);
  return reg_inc_beta(be.a, be.b, x);
}

double sample1(const Component& comp, rng::Stream& rs) {
  if (const auto* tn = std::get_if<TruncNormal>(&comp)) {
    for (int it = 0; it < kRejectionCap; ++it) {
      const double x = tn->mu + tn->sigma * rs.normal();
      if (x >= tn->lo && x <= tn->hi) return x;
    }
    throw std::runtime_error("sample: truncated-normal rejection cap exceeded on [" +
                             std::to_string(tn->lo) + ", " + std::to_string(tn->hi) + "]");
  }
  const auto& be = std::get<Beta>(comp);
  const double ga = gamma_draw(be.a, rs);
  const double gb = gamma_draw(be.b, rs);
  if (ga + gb == 0.0) return 0.5;  // both underflowed; measure-zero fallback
  return ga / (ga + gb);
}

double pdf(const InitialDistribution& dist, const std::vector<double>& x) {
  if (x.size() != dist.components.size()) {
    throw std::domain_error("pdf: point dimension " + std::to_string(x.size()) +
                            " does not match distribution dimension " +
                            std::to_string(dist.components.size()));
  }
  double p = 1.0;
  for (size_t j = 0; j < x.size(); ++j) p *= pdf1(dist.components[j], x[j]);
  return p;
}

std::vector<double> sample(const InitialDistribution& dist, rng::Stream& rs) {
  std::vector<double> x(dist.components.size());
  for (size_t j = 0; j < x.size(); ++j) x[j] = sample1(dist.components[j], rs);
  return x;
}

}  // namespace popdyn::init_dist
