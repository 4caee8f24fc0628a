#pragma once

#include <optional>
#include <span>

namespace tailrisk {

enum class ModeInit { median, mean, value };

struct ModeConfig {
    // Kernel bandwidth; rule_of_thumb_bandwidth(points) when absent.
    std::optional<double> bandwidth;
    // Convergence threshold on the shift, relative to the bandwidth.
    double tolerance = 1e-6;
    int max_iterations = 500;
    ModeInit init = ModeInit::median;
    double init_value = 0.0;  // used when init == ModeInit::value
};

// 1.06 * min(sd, IQR/1.34) * count^(-1/5). When the IQR collapses to zero on
// heavily tied data the sd alone is used. Throws std::domain_error when the
// sample is degenerate (all values equal) and std::invalid_argument for
// fewer than 2 points.
double rule_of_thumb_bandwidth(std::span<const double> points);

// Gaussian kernel density estimate at x.
double gaussian_kde(std::span<const double> points, double bandwidth, double x);

struct ModeResult {
    double mode = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Fixed-point mean-shift ascent to the nearest KDE mode, stopping when the
// shift drops below tolerance * bandwidth. A sample whose values are all
// equal short-circuits to that value (the KDE mode regardless of bandwidth).
ModeResult mean_shift_mode(std::span<const double> points, const ModeConfig& config = {});

}  // namespace tailrisk
