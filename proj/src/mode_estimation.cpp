#include "tailrisk/mode_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tailrisk {

namespace {

constexpr double inv_sqrt_two_pi = 0.3989422804014327;

double sample_sd(std::span<const double> points) {
    const double n = static_cast<double>(points.size());
    double mean = 0.0;
    for (double p : points) mean += p;
    mean /= n;
    double ss = 0.0;
    for (double p : points) ss += (p - mean) * (p - mean);
    return std::sqrt(ss / (n - 1.0));
}

// Type-7 (linear interpolation) quantile of a sorted copy.
double sorted_quantile(std::vector<double>& sorted, double p) {
    const double h = p * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median_of(std::span<const double> points) {
    std::vector<double> s(points.begin(), points.end());
    std::sort(s.begin(), s.end());
    return sorted_quantile(s, 0.5);
}

double mean_of(std::span<const double> points) {
    double m = 0.0;
    for (double p : points) m += p;
    return m / static_cast<double>(points.size());
}

bool all_equal(std::span<const double> points) {
    for (double p : points) {
        if (p != points.front()) return false;
    }
    return true;
}

}  // namespace

double rule_of_thumb_bandwidth(std::span<const double> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("rule_of_thumb_bandwidth: need at least 2 points");
    }
    const double sd = sample_sd(points);
    if (!(sd > 0.0)) {
        throw std::domain_error("rule_of_thumb_bandwidth: sample has zero spread");
    }
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    // Ties can flatten the IQR while the sd stays positive; fall back to sd.
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 1.06 * spread * std::pow(static_cast<double>(points.size()), -0.2);
}

double gaussian_kde(std::span<const double> points, double bandwidth, double x) {
    if (points.empty()) throw std::invalid_argument("gaussian_kde: empty sample");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("gaussian_kde: bandwidth must be positive");
    double acc = 0.0;
    for (double p : points) {
        const double z = (x - p) / bandwidth;
        acc += std::exp(-0.5 * z * z);
    }
    return acc * inv_sqrt_two_pi / (bandwidth * static_cast<double>(points.size()));
}

ModeResult mean_shift_mode(std::span<const double> points, const ModeConfig& config) {
    if (points.empty()) throw std::invalid_argument("mean_shift_mode: empty sample");
    if (!(config.tolerance > 0.0)) {
        throw std::invalid_argument("mean_shift_mode: tolerance must be positive");
    }
    if (config.max_iterations < 1) {
        throw std::invalid_argument("mean_shift_mode: max_iterations must be >= 1");
    }
    if (config.bandwidth && !(*config.bandwidth > 0.0)) {
        throw std::invalid_argument("mean_shift_mode: bandwidth must be positive");
    }

    if (all_equal(points)) {
        // Point mass: the mode is the common value for any bandwidth; this is
        // also the only case where the bandwidth rule has nothing to measure.
        return {points.front(), 0, true};
    }

    const double h = config.bandwidth ? *config.bandwidth : rule_of_thumb_bandwidth(points);
    double x;
    switch (config.init) {
        case ModeInit::median: x = median_of(points); break;
        case ModeInit::mean: x = mean_of(points); break;
        case ModeInit::value: x = config.init_value; break;
        default: throw std::invalid_argument("mean_shift_mode: bad init");
    }

    ModeResult result;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        // Weighted mean under the Gaussian kernel; exponents are shifted by
        // their maximum so far-away starting points cannot underflow to 0/0.
        double max_e = -std::numeric_limits<double>::infinity();
        for (double p : points) {
            const double z = (x - p) / h;
            max_e = std::max(max_e, -0.5 * z * z);
        }
        double num = 0.0, den = 0.0;
        for (double p : points) {
            const double z = (x - p) / h;
            const double w = std::exp(-0.5 * z * z - max_e);
            num += w * p;
            den += w;
        }
        const double next = num / den;
        result.iterations = iter;
        if (std::abs(next - x) < config.tolerance * h) {
            result.mode = next;
            result.converged = true;
            return result;
        }
        x = next;
    }
    result.mode = x;
    result.converged = false;
    return result;
}

}  // namespace tailrisk
