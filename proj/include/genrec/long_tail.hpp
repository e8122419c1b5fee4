// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "genrec/random.hpp"

namespace genrec {

// Heavy-tailed distribution families. All x_min-anchored families are
// supported on [x_min, inf); the log-normal on (0, inf).

// pdf(x) ~ x^-exponent, exponent > 1.
struct PowerLawSpec {
  double exponent;
  double x_min = 1.0;
  bool operator==(const PowerLawSpec&) const = default;
};

// pdf(x) ~ x^-exponent * exp(-rate * x).
struct PowerLawCutoffSpec {
  double exponent;
  double rate;
  double x_min = 1.0;
  bool operator==(const PowerLawCutoffSpec&) const = default;
};

// Survival(x) = exp(-rate * (x^shape - x_min^shape)).
struct StretchedExponentialSpec {
  double rate;
  double shape;
  double x_min = 1.0;
  bool operator==(const StretchedExponentialSpec&) const = default;
};

// ln X ~ Normal(log_mean, log_sd^2).
struct LogNormalSpec {
  double log_mean;
  double log_sd;
  bool operator==(const LogNormalSpec&) const = default;
};

using LongTailSpec = std::variant<PowerLawSpec, PowerLawCutoffSpec,
                                  StretchedExponentialSpec, LogNormalSpec>;

// Throws ParameterError on constraint violations (exponent <= 1, rate <= 0,
// shape <= 0, sd <= 0, x_min <= 0).
void validate_spec(const LongTailSpec& spec);

double support_min(const LongTailSpec& spec);

double long_tail_pdf(const LongTailSpec& spec, double x);

// Monotone CDF; 0 below the support lower bound.
double long_tail_cdf(const LongTailSpec& spec, double x);

// Inverse CDF. Closed form except for the exponential cutoff, which is
// inverted numerically by bisection.
double long_tail_quantile(const LongTailSpec& spec, double u);

// One draw. Inverse-CDF sampling where a closed form exists; the cutoff
// family uses rejection from the pure power law with acceptance
// exp(-rate * (x - x_min)), capped at 10^6 attempts.
double sample_long_tail(const LongTailSpec& spec, RandomStream& rng);

// Fraction of values <= x. Build once, query many times.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);

  double operator()(double x) const;
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// One-off variant of the above.
double empirical_cdf(std::span<const double> values, double x);

}  // namespace genrec
