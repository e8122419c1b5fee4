// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/math_util.hpp"

#include <cmath>
#include <limits>

#include "genrec/errors.hpp"

namespace genrec {

namespace {

// Acklam's rational approximation coefficients for the normal quantile.
const double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                     -2.759285104469687e+02, 1.383577518672690e+02,
                     -3.066479806614716e+01, 2.506628277459239e+00};
const double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                     -1.556989798598866e+02, 6.680131188771972e+01,
                     -1.328068155288572e+01};
const double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                     -2.400758277161838e+00, -2.549732539343734e+00,
                     4.374664141464968e+00,  2.938163982698783e+00};
const double kD[] = {7.784695709041462e-03, 3.224671290700398e-01,
                     2.445134137142996e+00, 3.754408661907416e+00};

double acklam_estimate(double p) {
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
            kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q +
             kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r +
          kA[5]) *
         q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r +
          1.0);
}

// Series expansion of the regularized lower incomplete gamma P(s, x),
// valid for x < s + 1.
double lower_gamma_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Modified Lentz continued fraction for the regularized upper Q(s, x),
// valid for x >= s + 1.
double upper_gamma_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double exponential_integral_e1(double x) {
  if (x <= 1.0) {
    const double euler_gamma = 0.57721566490153286;
    double sum = -euler_gamma - std::log(x);
    double term = 1.0;
    for (int n = 1; n < 200; ++n) {
      term *= -x / n;
      const double add = -term / n;
      sum += add;
      if (std::abs(add) < std::abs(sum) * 1e-16) break;
    }
    return sum;
  }
  // Continued fraction, same form as upper_gamma_cf at s = 0 but without
  // the 1/Gamma(s) normalization.
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x) * h;
}

double upper_gamma_positive(double s, double x) {
  if (x < s + 1.0) {
    return (1.0 - lower_gamma_series(s, x)) * std::tgamma(s);
  }
  return upper_gamma_cf(s, x) * std::tgamma(s);
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("inverse_normal_cdf: p must lie in (0, 1)");
  }
  // Relative error below 1.2e-9 across the whole range, which is far
  // tighter than any statistical tolerance in this codebase; this sits on
  // the sampling hot path, so no refinement step.
  return acklam_estimate(p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double upper_incomplete_gamma(double s, double x) {
  if (!(x > 0.0)) {
    throw ParameterError("upper_incomplete_gamma: x must be > 0");
  }
  if (s > 0.0) return upper_gamma_positive(s, x);
  if (s == 0.0) return exponential_integral_e1(x);
  // Lift negative s with the downward recurrence.
  const int steps = static_cast<int>(std::ceil(-s));
  const double s0 = s + steps;
  double g = (s0 == 0.0) ? exponential_integral_e1(x) : upper_gamma_positive(s0, x);
  double si = s0;
  for (int k = 0; k < steps; ++k) {
    si -= 1.0;
    g = (g - std::pow(x, si) * std::exp(-x)) / si;
  }
  return g;
}

}  // namespace genrec
