// Apache License, Version 2.0, refer to LICENSE.txt
//
// Test-only oracles, kept independent of the library code paths they check:
// bisection CDF inversion, adaptive Simpson quadrature, and exact subset
// enumeration of the per-pass acceptance process.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace genrec::testing {

// Inverts a monotone CDF by bisection over an expanding bracket.
inline double invert_cdf_bisect(const std::function<double(double)>& cdf, double u,
                                double lo) {
  double hi = lo + 1.0;
  while (cdf(hi) < u) hi = lo + (hi - lo) * 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {
inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

// Exact per-item inclusion probabilities of the acceptance process: full
// Bernoulli passes accumulate a set until it reaches `budget`, then a
// uniform without-replacement subsample of size `budget` is kept. Items are
// indexed by bit; at most 20 items.
inline std::vector<double> enumerate_inclusion(const std::vector<double>& accept,
                                               std::uint32_t budget,
                                               std::uint32_t max_passes) {
  const std::size_t n = accept.size();
  if (n > 20) throw std::invalid_argument("enumeration oracle limited to 20 items");
  if (budget > n) throw std::invalid_argument("budget exceeds item count");

  using Dist = std::unordered_map<std::uint32_t, double>;
  Dist active{{0u, 1.0}};
  Dist absorbed;
  const auto popcount = [](std::uint32_t m) { return __builtin_popcount(m); };

  if (budget == 0) {
    absorbed = active;
    active.clear();
  }

  for (std::uint32_t pass = 0; pass < max_passes && !active.empty(); ++pass) {
    Dist next;
    for (const auto& [state, prob] : active) {
      // Distribute over all acceptance outcomes for the missing items.
      std::vector<std::size_t> missing;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(state & (1u << i))) missing.push_back(i);
      }
      const std::uint32_t combos = 1u << missing.size();
      for (std::uint32_t mask = 0; mask < combos; ++mask) {
        double p = prob;
        std::uint32_t new_state = state;
        for (std::size_t k = 0; k < missing.size(); ++k) {
          if (mask & (1u << k)) {
            p *= accept[missing[k]];
            new_state |= 1u << missing[k];
          } else {
            p *= 1.0 - accept[missing[k]];
          }
        }
        if (p == 0.0) continue;
        if (popcount(new_state) >= static_cast<int>(budget)) {
          absorbed[new_state] += p;
        } else {
          next[new_state] += p;
        }
      }
    }
    active = std::move(next);
    double absorbed_mass = 0.0;
    for (const auto& [state, prob] : absorbed) absorbed_mass += prob;
    if (absorbed_mass > 1.0 - 1e-13) break;
  }

  double residual = 0.0;
  for (const auto& [state, prob] : active) residual += prob;
  if (residual > 1e-9) {
    throw std::runtime_error("enumeration oracle did not converge");
  }

  std::vector<double> inclusion(n, 0.0);
  for (const auto& [state, prob] : absorbed) {
    const int size = popcount(state);
    const double keep = std::min(1.0, double(budget) / double(size));
    for (std::size_t i = 0; i < n; ++i) {
      if (state & (1u << i)) inclusion[i] += prob * keep;
    }
  }
  return inclusion;
}

}  // namespace genrec::testing
