#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tailrisk {

enum class Family { normal, exponential, pareto, student_t };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// A parametric loss distribution. Families and parameters:
//   normal(sigma)       centered at zero, sigma > 0
//   exponential(xi)     density xi * exp(-xi x) on x >= 0, xi > 0
//   pareto(scale, xi)   density xi A^xi / x^(xi+1) on x >= A, A > 0, xi > 0
//   student_t(nu)       standard Student-t with nu > 0 degrees of freedom
class DistributionSpec {
public:
    static DistributionSpec normal(double sigma);
    static DistributionSpec exponential(double xi);
    static DistributionSpec pareto(double scale, double xi);
    static DistributionSpec student_t(double nu);

    Family family() const { return family_; }

    double sigma() const;  // normal only
    double xi() const;     // exponential / pareto only
    double scale() const;  // pareto only
    double nu() const;     // student_t only

    // Lower end of the support: -inf, 0, scale, -inf respectively.
    double support_lower() const;

    std::string describe() const;

private:
    DistributionSpec(Family f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
    Family family_;
    double p1_;
    double p2_;
};

double pdf(const DistributionSpec& d, double x);
// d/dx pdf. At a support boundary this is the one-sided derivative from inside.
double pdf_derivative(const DistributionSpec& d, double x);
double cdf(const DistributionSpec& d, double x);
// Inverse cdf for p in (0, 1); |cdf(quantile(p)) - p| stays below 1e-10.
double quantile(const DistributionSpec& d, double p);

// count i.i.d. draws by inverse-transform sampling from a mt19937_64 stream.
// Identical seeds give identical output on every platform.
std::vector<double> sample(const DistributionSpec& d, std::size_t count, std::uint64_t seed);

// Power-law scale A of the two-sided Student-t tail: P(|X| > x) ~ (A/x)^nu.
// For nu = 1 this is 2/pi.
double student_tail_scale(double nu);

// Most probable maximum of a block of n draws (the mode of the block-maximum
// density). Exact for exponential and pareto; for normal it is the root
// sigma * sqrt(W0(n^2 / 2pi)) of the large-n mode condition; for student_t it
// is the pareto form with the tail-equivalent scale, accurate for large n.
double mpmr_closed_form(const DistributionSpec& d, std::size_t n);

// Expected maximum of a block of n draws. Defined for exponential (any n),
// pareto with xi > 1, and student_t with nu > 1 (tail-equivalent form).
// Throws std::domain_error otherwise (normal has no closed form here).
double emr_closed_form(const DistributionSpec& d, std::size_t n);

struct MaxStatistics {
    std::size_t n = 0;
    double mpmr = 0.0;
    std::optional<double> emr;  // absent when no finite closed form exists
};

MaxStatistics max_statistics(const DistributionSpec& d, std::size_t n);

// Leading-order large-n forms of the block-maximum mode and mean. These are
// documentation aids: they expose the n^(1/xi) (or slower) growth directly
// and converge to the closed forms as n grows.
double mpmr_large_n(const DistributionSpec& d, std::size_t n);
double emr_large_n(const DistributionSpec& d, std::size_t n);

namespace detail {
// Standard normal helpers shared across the library.
double standard_normal_cdf(double x);
double standard_normal_quantile(double p);
// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);
}  // namespace detail

}  // namespace tailrisk
