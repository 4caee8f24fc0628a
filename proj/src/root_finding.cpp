#include "tailrisk/root_finding.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tailrisk {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol, double abs_tol, int max_iter) {
    if (!(lo < hi)) throw std::invalid_argument("find_root: requires lo < hi");
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        throw std::domain_error("find_root: function not finite at bracket endpoints");
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw std::domain_error("find_root: no sign change on [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
    }

    // Classic Brent: b is the current best iterate, a the previous one,
    // c the last point with f(c) of opposite sign to f(b).
    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * (rel_tol * std::abs(b) + abs_tol);
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // Interpolate: secant if two points, inverse quadratic if three.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double r = fb / fc;
                const double t = fa / fc;
                p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m; e = m;  // interpolation rejected, bisect
            }
        } else {
            d = m; e = m;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (!std::isfinite(fb)) {
            throw std::domain_error("find_root: function not finite at x = " + std::to_string(b));
        }
    }
    throw std::runtime_error("find_root: no convergence after " + std::to_string(max_iter) +
                             " iterations");
}

}  // namespace tailrisk
