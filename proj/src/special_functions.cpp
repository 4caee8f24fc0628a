#include "tailrisk/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tailrisk {

namespace {

// -1/e rounded to nearest double. Inputs a few ulp below (from computing
// x*exp(x) in floating point near the branch point) are snapped up.
constexpr double neg_inv_e = -0.36787944117144233;

double initial_w0_guess(double y) {
    if (y > 2.718281828459045) {
        // Asymptotic: W ~ L1 - L2 + L2/L1 with L1 = log y, L2 = log L1.
        const double l1 = std::log(y);
        const double l2 = std::log(l1);
        return l1 - l2 + l2 / l1;
    }
    if (y < -0.25) {
        // Series around the branch point y = -1/e in p = sqrt(2(e*y + 1)).
        const double p = std::sqrt(2.0 * (2.718281828459045 * y + 1.0));
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    }
    // Moderate region: log1p(y) is within Halley's basin everywhere here.
    return std::log1p(y);
}

}  // namespace

double lambert_w0(double y) {
    if (!(y >= neg_inv_e)) {
        if (y > neg_inv_e - 1e-15) {
            y = neg_inv_e;  // rounding slop at the branch point
        } else {
            throw std::domain_error("lambert_w0: argument " + std::to_string(y) +
                                    " below -1/e");
        }
    }
    if (!std::isfinite(y)) throw std::domain_error("lambert_w0: non-finite argument");
    if (y == 0.0) return 0.0;
    if (y == neg_inv_e) return -1.0;

    double w = initial_w0_guess(y);
    for (int iter = 0; iter < 60; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        const double fp = ew * (1.0 + w);
        // Halley step: f'' = e^w (2 + w).
        const double denom = fp - f * (ew * (2.0 + w)) / (2.0 * fp);
        const double step = f / denom;
        const double w_next = w - step;
        if (std::abs(w_next - w) <= 1e-15 * (1.0 + std::abs(w_next))) return w_next;
        w = w_next;
    }
    return w;  // Halley is cubically convergent; reaching here still means ~machine precision
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive, got " +
                                std::to_string(x));
    }
    return std::lgamma(x);
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("beta: both arguments must be positive");
    }
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

double harmonic(std::uint64_t n) {
    if (n == 0) throw std::domain_error("harmonic: n must be >= 1");
    if (n <= 1000000) {
        // Sum smallest terms first for accuracy.
        double sum = 0.0;
        for (std::uint64_t i = n; i >= 1; --i) sum += 1.0 / static_cast<double>(i);
        return sum;
    }
    const double nd = static_cast<double>(n);
    return euler_gamma + std::log(nd) + 1.0 / (2.0 * nd) - 1.0 / (12.0 * nd * nd);
}

}  // namespace tailrisk
