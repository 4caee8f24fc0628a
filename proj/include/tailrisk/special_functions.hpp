#pragma once

#include <cstdint>

namespace tailrisk {

inline constexpr double euler_gamma = 0.5772156649015328606;

// Principal branch W0 of w * exp(w) = y, defined for y >= -1/e.
// Halley iteration from a region-appropriate starting point; converges to
// machine precision (relative error well under 1e-12) in a handful of steps.
// Throws std::domain_error for y < -1/e or non-finite y.
double lambert_w0(double y);

// log(Gamma(x)) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Euler beta function B(a, b) for a, b > 0, evaluated in log space so that
// large arguments (e.g. B(n, 1 - 1/xi) with n ~ 1e6) do not overflow.
double beta(double a, double b);

// n-th harmonic number. Exact summation up to 1e6 terms, then the asymptotic
// expansion gamma + log n + 1/(2n) - 1/(12 n^2), whose error at the
// switch point is ~1e-26, far below double resolution.
double harmonic(std::uint64_t n);

}  // namespace tailrisk
