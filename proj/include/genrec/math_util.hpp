// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

namespace genrec {

// Standard normal quantile function. Rational approximation refined by one
// Halley step, good to ~1e-15 over (0, 1).
double inverse_normal_cdf(double p);

// Standard normal CDF.
double normal_cdf(double x);

// Upper incomplete gamma function Gamma(s, x) for real s (including s <= 0)
// and x > 0. Negative s is lifted to the positive range via the recurrence
// Gamma(s, x) = (Gamma(s+1, x) - x^s e^-x) / s.
double upper_incomplete_gamma(double s, double x);

}  // namespace genrec
