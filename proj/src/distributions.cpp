#include "tailrisk/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailrisk/root_finding.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/special_functions.hpp"

namespace tailrisk {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double sqrt_two = 1.4142135623730950488;
constexpr double sqrt_two_pi = 2.5066282746310005024;
constexpr double inf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

DistributionSpec DistributionSpec::normal(double sigma) {
    require_positive(sigma, "normal: sigma");
    return DistributionSpec(Family::normal, sigma, 0.0);
}

DistributionSpec DistributionSpec::exponential(double xi) {
    require_positive(xi, "exponential: xi");
    return DistributionSpec(Family::exponential, xi, 0.0);
}

DistributionSpec DistributionSpec::pareto(double scale, double xi) {
    require_positive(scale, "pareto: scale");
    require_positive(xi, "pareto: xi");
    return DistributionSpec(Family::pareto, scale, xi);
}

DistributionSpec DistributionSpec::student_t(double nu) {
    require_positive(nu, "student_t: nu");
    return DistributionSpec(Family::student_t, nu, 0.0);
}

double DistributionSpec::sigma() const {
    if (family_ != Family::normal) throw std::logic_error("sigma: not a normal spec");
    return p1_;
}

double DistributionSpec::xi() const {
    if (family_ == Family::exponential) return p1_;
    if (family_ == Family::pareto) return p2_;
    throw std::logic_error("xi: not an exponential or pareto spec");
}

double DistributionSpec::scale() const {
    if (family_ != Family::pareto) throw std::logic_error("scale: not a pareto spec");
    return p1_;
}

double DistributionSpec::nu() const {
    if (family_ != Family::student_t) throw std::logic_error("nu: not a student_t spec");
    return p1_;
}

double DistributionSpec::support_lower() const {
    switch (family_) {
        case Family::exponential: return 0.0;
        case Family::pareto: return p1_;
        default: return -inf;
    }
}

std::string DistributionSpec::describe() const {
    switch (family_) {
        case Family::normal: return "normal(sigma=" + std::to_string(p1_) + ")";
        case Family::exponential: return "exponential(xi=" + std::to_string(p1_) + ")";
        case Family::pareto:
            return "pareto(scale=" + std::to_string(p1_) + ", xi=" + std::to_string(p2_) + ")";
        case Family::student_t: return "student_t(nu=" + std::to_string(p1_) + ")";
    }
    return "?";
}

std::string family_name(Family f) {
    switch (f) {
        case Family::normal: return "normal";
        case Family::exponential: return "exponential";
        case Family::pareto: return "pareto";
        case Family::student_t: return "student-t";
    }
    throw std::logic_error("family_name: bad enum value");
}

Family family_from_name(const std::string& name) {
    if (name == "normal") return Family::normal;
    if (name == "exponential") return Family::exponential;
    if (name == "pareto") return Family::pareto;
    if (name == "student-t" || name == "student_t") return Family::student_t;
    throw std::invalid_argument("unknown distribution family '" + name +
                                "' (expected normal, exponential, pareto, student-t)");
}

// ---------------------------------------------------------------------------
// Numeric kernels
// ---------------------------------------------------------------------------

namespace detail {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / sqrt_two); }

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 3e-16) return h;
    }
    throw std::runtime_error("reg_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("reg_incomplete_beta: a, b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) -
                             (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(log_front);
    // Use the representation that converges fastest.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double standard_normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("standard_normal_quantile: p must lie in (0, 1)");
    }
    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = standard_normal_cdf(x) - p;
    const double u = e * sqrt_two_pi * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

namespace {

double student_log_norm_const(double nu) {
    // log of Gamma((nu+1)/2) / (sqrt(nu pi) Gamma(nu/2))
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
           0.5 * std::log(nu * pi);
}

double student_pdf(double nu, double x) {
    return std::exp(student_log_norm_const(nu) -
                    0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_cdf(double nu, double x) {
    if (x == 0.0) return 0.5;
    const double z = nu / (nu + x * x);
    const double half_tail = 0.5 * detail::reg_incomplete_beta(0.5 * nu, 0.5, z);
    return x > 0.0 ? 1.0 - half_tail : half_tail;
}

double student_quantile(double nu, double p) {
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_quantile(nu, 1.0 - p);
    if (nu == 1.0) return std::tan(pi * (p - 0.5));  // Cauchy
    // Bracket the root of cdf(x) = p above zero, then polish with Brent.
    double hi = 1.0;
    while (student_cdf(nu, hi) < p) {
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("student_quantile: bracket overflow");
    }
    return find_root([&](double x) { return student_cdf(nu, x) - p; }, 0.0, hi, 1e-13,
                     1e-300, 200);
}

}  // namespace

// ---------------------------------------------------------------------------
// Density, distribution, quantile
// ---------------------------------------------------------------------------

double pdf(const DistributionSpec& d, double x) {
    switch (d.family()) {
        case Family::normal: {
            const double s = d.sigma();
            const double z = x / s;
            return std::exp(-0.5 * z * z) / (s * sqrt_two_pi);
        }
        case Family::exponential: {
            const double xi = d.xi();
            return x < 0.0 ? 0.0 : xi * std::exp(-xi * x);
        }
        case Family::pareto: {
            const double a = d.scale(), xi = d.xi();
            if (x < a) return 0.0;
            return xi / a * std::exp(-(xi + 1.0) * std::log(x / a));
        }
        case Family::student_t: return student_pdf(d.nu(), x);
    }
    throw std::logic_error("pdf: bad family");
}

double pdf_derivative(const DistributionSpec& d, double x) {
    switch (d.family()) {
        case Family::normal: {
            const double s = d.sigma();
            return -(x / (s * s)) * pdf(d, x);
        }
        case Family::exponential:
            return x < 0.0 ? 0.0 : -d.xi() * pdf(d, x);
        case Family::pareto:
            return x < d.scale() ? 0.0 : -(d.xi() + 1.0) / x * pdf(d, x);
        case Family::student_t: {
            const double nu = d.nu();
            return -(nu + 1.0) * x / (nu + x * x) * pdf(d, x);
        }
    }
    throw std::logic_error("pdf_derivative: bad family");
}

double cdf(const DistributionSpec& d, double x) {
    switch (d.family()) {
        case Family::normal: return detail::standard_normal_cdf(x / d.sigma());
        case Family::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-d.xi() * x);
        case Family::pareto: {
            const double a = d.scale(), xi = d.xi();
            if (x <= a) return 0.0;
            return -std::expm1(-xi * std::log(x / a));
        }
        case Family::student_t: return student_cdf(d.nu(), x);
    }
    throw std::logic_error("cdf: bad family");
}

double quantile(const DistributionSpec& d, double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("quantile: p must lie in (0, 1)");
    }
    switch (d.family()) {
        case Family::normal: return d.sigma() * detail::standard_normal_quantile(p);
        case Family::exponential: return -std::log1p(-p) / d.xi();
        case Family::pareto:
            return d.scale() * std::exp(-std::log1p(-p) / d.xi());
        case Family::student_t: return student_quantile(d.nu(), p);
    }
    throw std::logic_error("quantile: bad family");
}

std::vector<double> sample(const DistributionSpec& d, std::size_t count, std::uint64_t seed) {
    std::vector<double> out(count);
    std::mt19937_64 eng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = quantile(d, canonical_unit(eng));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Block-maximum closed forms
// ---------------------------------------------------------------------------

double student_tail_scale(double nu) {
    require_positive(nu, "student_tail_scale: nu");
    // A = sqrt(nu) * (Gamma((nu+1)/2) / (sqrt(pi) Gamma((nu+2)/2)))^(1/nu)
    const double log_ratio =
        std::lgamma(0.5 * (nu + 1.0)) - 0.5 * std::log(pi) - std::lgamma(0.5 * (nu + 2.0));
    return std::sqrt(nu) * std::exp(log_ratio / nu);
}

namespace {

void require_block(std::size_t n) {
    if (n == 0) throw std::invalid_argument("block size n must be >= 1");
}

double pareto_mode_of_max(double scale, double xi, std::size_t n) {
    // Mode of the maximum of n pareto draws: scale * ((1 + n xi)/(1 + xi))^(1/xi).
    const double nd = static_cast<double>(n);
    return scale * std::exp(std::log((1.0 + nd * xi) / (1.0 + xi)) / xi);
}

double pareto_mean_of_max(double scale, double xi, std::size_t n) {
    // Mean of the maximum of n pareto draws, finite only for xi > 1:
    // scale * n * B(n, 1 - 1/xi).
    const double nd = static_cast<double>(n);
    return scale * nd * beta(nd, 1.0 - 1.0 / xi);
}

}  // namespace

double mpmr_closed_form(const DistributionSpec& d, std::size_t n) {
    require_block(n);
    const double nd = static_cast<double>(n);
    switch (d.family()) {
        case Family::normal:
            return d.sigma() * std::sqrt(lambert_w0(nd * nd / (2.0 * pi)));
        case Family::exponential:
            return std::log(nd) / d.xi();
        case Family::pareto:
            return pareto_mode_of_max(d.scale(), d.xi(), n);
        case Family::student_t:
            return pareto_mode_of_max(student_tail_scale(d.nu()), d.nu(), n);
    }
    throw std::logic_error("mpmr_closed_form: bad family");
}

double emr_closed_form(const DistributionSpec& d, std::size_t n) {
    require_block(n);
    switch (d.family()) {
        case Family::normal:
            throw std::domain_error("emr_closed_form: no closed form for the normal family");
        case Family::exponential:
            return harmonic(n) / d.xi();
        case Family::pareto:
            if (!(d.xi() > 1.0)) {
                throw std::domain_error(
                    "emr_closed_form: pareto mean of maxima requires xi > 1");
            }
            return pareto_mean_of_max(d.scale(), d.xi(), n);
        case Family::student_t:
            if (!(d.nu() > 1.0)) {
                throw std::domain_error(
                    "emr_closed_form: student_t mean of maxima requires nu > 1");
            }
            return pareto_mean_of_max(student_tail_scale(d.nu()), d.nu(), n);
    }
    throw std::logic_error("emr_closed_form: bad family");
}

MaxStatistics max_statistics(const DistributionSpec& d, std::size_t n) {
    MaxStatistics out;
    out.n = n;
    out.mpmr = mpmr_closed_form(d, n);
    const bool has_emr = d.family() == Family::exponential ||
                         (d.family() == Family::pareto && d.xi() > 1.0) ||
                         (d.family() == Family::student_t && d.nu() > 1.0);
    if (has_emr) out.emr = emr_closed_form(d, n);
    return out;
}

double mpmr_large_n(const DistributionSpec& d, std::size_t n) {
    require_block(n);
    const double nd = static_cast<double>(n);
    switch (d.family()) {
        case Family::normal: {
            // W0(z) ~ L - l + l/L with L = log z, l = log L; the expansion
            // only makes sense once it is positive (z >= e, i.e. n >= 5).
            const double z = nd * nd / (2.0 * pi);
            if (z <= 1.0) {
                throw std::domain_error("mpmr_large_n: block size too small for the normal expansion");
            }
            const double L = std::log(z);
            const double l = std::log(L);
            const double w = L - l + l / L;
            if (!(w > 0.0)) {
                throw std::domain_error("mpmr_large_n: block size too small for the normal expansion");
            }
            return d.sigma() * std::sqrt(w);
        }
        case Family::exponential:
            return std::log(nd) / d.xi();
        case Family::pareto:
            return d.scale() * std::exp(std::log(nd * d.xi() / (1.0 + d.xi())) / d.xi());
        case Family::student_t: {
            const double a = student_tail_scale(d.nu());
            return a * std::exp(std::log(nd * d.nu() / (1.0 + d.nu())) / d.nu());
        }
    }
    throw std::logic_error("mpmr_large_n: bad family");
}

double emr_large_n(const DistributionSpec& d, std::size_t n) {
    require_block(n);
    const double nd = static_cast<double>(n);
    switch (d.family()) {
        case Family::normal:
            throw std::domain_error("emr_large_n: no expansion for the normal family");
        case Family::exponential:
            return (std::log(nd) + euler_gamma) / d.xi();
        case Family::pareto: {
            if (!(d.xi() > 1.0)) throw std::domain_error("emr_large_n: requires xi > 1");
            // n B(n, 1 - 1/xi) ~ Gamma(1 - 1/xi) n^(1/xi)
            return d.scale() * std::exp(log_gamma(1.0 - 1.0 / d.xi()) +
                                        std::log(nd) / d.xi());
        }
        case Family::student_t: {
            if (!(d.nu() > 1.0)) throw std::domain_error("emr_large_n: requires nu > 1");
            const double a = student_tail_scale(d.nu());
            return a * std::exp(log_gamma(1.0 - 1.0 / d.nu()) + std::log(nd) / d.nu());
        }
    }
    throw std::logic_error("emr_large_n: bad family");
}

}  // namespace tailrisk
