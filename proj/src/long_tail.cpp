// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/long_tail.hpp"

#include <algorithm>
#include <cmath>

#include "genrec/errors.hpp"
#include "genrec/math_util.hpp"

namespace genrec {

namespace {

struct Validator {
  void operator()(const PowerLawSpec& s) const {
    if (!(s.exponent > 1.0)) throw ParameterError("power law exponent must be > 1");
    if (!(s.x_min > 0.0)) throw ParameterError("power law x_min must be > 0");
  }
  void operator()(const PowerLawCutoffSpec& s) const {
    if (!(s.exponent > 1.0)) throw ParameterError("cutoff exponent must be > 1");
    if (!(s.rate > 0.0)) throw ParameterError("cutoff rate must be > 0");
    if (!(s.x_min > 0.0)) throw ParameterError("cutoff x_min must be > 0");
  }
  void operator()(const StretchedExponentialSpec& s) const {
    if (!(s.rate > 0.0)) throw ParameterError("stretched exponential rate must be > 0");
    if (!(s.shape > 0.0)) throw ParameterError("stretched exponential shape must be > 0");
    if (!(s.x_min > 0.0)) throw ParameterError("stretched exponential x_min must be > 0");
  }
  void operator()(const LogNormalSpec& s) const {
    if (!(s.log_sd > 0.0)) throw ParameterError("log-normal sd must be > 0");
  }
};

// Normalization of the cutoff family: integral of x^-a e^(-r x) over
// [x_min, inf) equals r^(a-1) * Gamma(1-a, r*x_min).
double cutoff_tail_mass(const PowerLawCutoffSpec& s, double from) {
  return std::pow(s.rate, s.exponent - 1.0) *
         upper_incomplete_gamma(1.0 - s.exponent, s.rate * from);
}

}  // namespace

void validate_spec(const LongTailSpec& spec) { std::visit(Validator{}, spec); }

double support_min(const LongTailSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LogNormalSpec>) {
          return 0.0;
        } else {
          return s.x_min;
        }
      },
      spec);
}

double long_tail_pdf(const LongTailSpec& spec, double x) {
  validate_spec(spec);
  if (const auto* pl = std::get_if<PowerLawSpec>(&spec)) {
    if (x < pl->x_min) return 0.0;
    const double a = pl->exponent;
    return (a - 1.0) / pl->x_min * std::pow(x / pl->x_min, -a);
  }
  if (const auto* co = std::get_if<PowerLawCutoffSpec>(&spec)) {
    if (x < co->x_min) return 0.0;
    return std::pow(x, -co->exponent) * std::exp(-co->rate * x) /
           cutoff_tail_mass(*co, co->x_min);
  }
  if (const auto* se = std::get_if<StretchedExponentialSpec>(&spec)) {
    if (x < se->x_min) return 0.0;
    const double b = se->shape;
    return se->rate * b * std::pow(x, b - 1.0) *
           std::exp(-se->rate * (std::pow(x, b) - std::pow(se->x_min, b)));
  }
  const auto& ln = std::get<LogNormalSpec>(spec);
  if (x <= 0.0) return 0.0;
  const double z = (std::log(x) - ln.log_mean) / ln.log_sd;
  return std::exp(-0.5 * z * z) / (x * ln.log_sd * std::sqrt(2.0 * M_PI));
}

double long_tail_cdf(const LongTailSpec& spec, double x) {
  validate_spec(spec);
  if (const auto* pl = std::get_if<PowerLawSpec>(&spec)) {
    if (x <= pl->x_min) return 0.0;
    return 1.0 - std::pow(x / pl->x_min, 1.0 - pl->exponent);
  }
  if (const auto* co = std::get_if<PowerLawCutoffSpec>(&spec)) {
    if (x <= co->x_min) return 0.0;
    return 1.0 - cutoff_tail_mass(*co, x) / cutoff_tail_mass(*co, co->x_min);
  }
  if (const auto* se = std::get_if<StretchedExponentialSpec>(&spec)) {
    if (x <= se->x_min) return 0.0;
    const double b = se->shape;
    return 1.0 -
           std::exp(-se->rate * (std::pow(x, b) - std::pow(se->x_min, b)));
  }
  const auto& ln = std::get<LogNormalSpec>(spec);
  if (x <= 0.0) return 0.0;
  return normal_cdf((std::log(x) - ln.log_mean) / ln.log_sd);
}

double long_tail_quantile(const LongTailSpec& spec, double u) {
  validate_spec(spec);
  if (!(u >= 0.0 && u < 1.0)) {
    throw ParameterError("quantile argument must lie in [0, 1)");
  }
  if (const auto* pl = std::get_if<PowerLawSpec>(&spec)) {
    return pl->x_min * std::pow(1.0 - u, -1.0 / (pl->exponent - 1.0));
  }
  if (const auto* se = std::get_if<StretchedExponentialSpec>(&spec)) {
    const double b = se->shape;
    return std::pow(std::pow(se->x_min, b) - std::log(1.0 - u) / se->rate,
                    1.0 / b);
  }
  if (const auto* ln = std::get_if<LogNormalSpec>(&spec)) {
    if (u == 0.0) return 0.0;
    return std::exp(ln->log_mean + ln->log_sd * inverse_normal_cdf(u));
  }
  // Exponential cutoff: bisection on the CDF over an expanding bracket.
  const auto& co = std::get<PowerLawCutoffSpec>(spec);
  if (u == 0.0) return co.x_min;
  double lo = co.x_min;
  double hi = co.x_min * 2.0;
  while (long_tail_cdf(spec, hi) < u) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (long_tail_cdf(spec, mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double sample_long_tail(const LongTailSpec& spec, RandomStream& rng) {
  validate_spec(spec);
  if (const auto* co = std::get_if<PowerLawCutoffSpec>(&spec)) {
    const PowerLawSpec proposal{co->exponent, co->x_min};
    for (int attempt = 0; attempt < 1000000; ++attempt) {
      const double x = sample_long_tail(LongTailSpec(proposal), rng);
      if (rng.next_double() < std::exp(-co->rate * (x - co->x_min))) return x;
    }
    throw ParameterError("cutoff rejection sampling exceeded 10^6 attempts");
  }
  if (std::holds_alternative<LogNormalSpec>(spec)) {
    return long_tail_quantile(spec, rng.next_open());
  }
  return long_tail_quantile(spec, rng.next_double());
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values)
    : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw ParameterError("empirical CDF requires a nonempty sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double empirical_cdf(std::span<const double> values, double x) {
  return EmpiricalCdf(std::vector<double>(values.begin(), values.end()))(x);
}

}  // namespace genrec
