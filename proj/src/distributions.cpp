// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "genrec/errors.hpp"

namespace genrec {

ConcentrationVector::ConcentrationVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw ParameterError("concentration vector must be nonempty");
  }
  for (double v : values_) {
    if (!(v > 0.0)) {
      throw ParameterError("concentration components must be > 0");
    }
  }
}

SimplexVector::SimplexVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("simplex vector must be nonempty");
  double sum = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0)) throw ParameterError("simplex components must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ParameterError("simplex components must sum to 1");
  }
}

double sample_gamma(double shape, RandomStream& rng) {
  if (!(shape > 0.0)) throw ParameterError("gamma shape must be > 0");
  if (shape < 1.0) {
    // Boost: X ~ Gamma(shape+1), U^(1/shape) * X ~ Gamma(shape). The power
    // can underflow to 0 for tiny shapes; downstream treats that as an
    // exact-zero simplex component.
    const double u = rng.next_open();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.next_normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

SimplexVector sample_dirichlet(const ConcentrationVector& conc,
                               RandomStream& rng) {
  std::vector<double> out(conc.size());
  double total = 0.0;
  for (std::size_t k = 0; k < conc.size(); ++k) {
    out[k] = sample_gamma(conc[k], rng);
    total += out[k];
  }
  if (total <= 0.0) {
    // All gamma draws underflowed; put the mass on the heaviest component.
    std::size_t best = 0;
    for (std::size_t k = 1; k < conc.size(); ++k) {
      if (conc[k] > conc[best]) best = k;
    }
    std::fill(out.begin(), out.end(), 0.0);
    out[best] = 1.0;
    return SimplexVector(std::move(out));
  }
  for (double& v : out) v /= total;
  return SimplexVector(std::move(out));
}

BetaShape beta_shape_from_mean_var(double mean, double var) {
  if (!(mean > 0.0 && mean < 1.0)) {
    throw ParameterError("beta mean must lie in (0, 1)");
  }
  if (!(var > 0.0)) throw ParameterError("beta variance must be > 0");
  const double m = std::clamp(mean, 1e-6, 1.0 - 1e-6);
  const double bound = m * (1.0 - m);
  const double v = (var >= bound) ? 0.25 * bound : var;
  const double nu = bound / v - 1.0;
  return {m * nu, (1.0 - m) * nu};
}

double sample_beta(const BetaShape& shape, RandomStream& rng) {
  const double ga = sample_gamma(shape.a, rng);
  const double gb = sample_gamma(shape.b, rng);
  const double total = ga + gb;
  if (total <= 0.0) return shape.a / (shape.a + shape.b);
  return ga / total;
}

double sample_beta_mean_var(double mean, double var, RandomStream& rng) {
  return sample_beta(beta_shape_from_mean_var(mean, var), rng);
}

bool sample_bernoulli(double p, RandomStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("bernoulli probability must lie in [0, 1]");
  }
  return rng.next_double() < p;
}

}  // namespace genrec
