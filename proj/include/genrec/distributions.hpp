// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <vector>

#include "genrec/random.hpp"

namespace genrec {

// Strictly positive Dirichlet parameter vector.
class ConcentrationVector {
 public:
  explicit ConcentrationVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Nonnegative vector summing to 1 (within 1e-9).
class SimplexVector {
 public:
  explicit SimplexVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Gamma(shape, scale 1) variate; Marsaglia-Tsang for shape >= 1, boosted
// from shape+1 otherwise.
double sample_gamma(double shape, RandomStream& rng);

SimplexVector sample_dirichlet(const ConcentrationVector& conc,
                               RandomStream& rng);

// Shape parameters of the Beta distribution matching a requested mean and
// variance: a = mean*nu, b = (1-mean)*nu with nu = mean(1-mean)/var - 1.
struct BetaShape {
  double a;
  double b;
};

// Moment-matched shape conversion. The mean is clamped to
// [1e-6, 1-1e-6] first; an infeasible variance (var >= mean(1-mean)) is
// shrunk to a quarter of the bound so generation stays total.
BetaShape beta_shape_from_mean_var(double mean, double var);

double sample_beta(const BetaShape& shape, RandomStream& rng);
double sample_beta_mean_var(double mean, double var, RandomStream& rng);

// True with probability p; p must lie in [0, 1] (callers clamp first).
bool sample_bernoulli(double p, RandomStream& rng);

}  // namespace genrec
