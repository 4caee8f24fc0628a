#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tailrisk/mode_estimation.hpp"

namespace tailrisk {

enum class Estimator {
    mpmr,
    emr,
    hill,
    least_squares,
    weighted_least_squares,
    percentiles,
    modified_percentiles,
    geometric_percentiles,
    mle,
    moments,
};

// Kebab-case identifiers used on the command line and in output tables.
std::string estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);
std::vector<Estimator> all_estimators();

// Upper-tail subsample handed to every estimator: sorted ascending, strictly
// positive, with the smallest retained value as the threshold.
struct TailSample {
    std::vector<double> values;
    double threshold = 0.0;
};

// Top ceil(tail_fraction * raw.size()) values of raw. Requires
// tail_fraction in (0, 1] and a resulting tail of >= 2 strictly positive
// values (throws std::domain_error otherwise).
TailSample make_tail_sample(std::span<const double> raw, double tail_fraction);

struct TailIndexEstimate {
    Estimator method = Estimator::hill;
    double xi_hat = 0.0;  // always > 0; estimators throw instead of clamping
    std::map<std::string, double> diagnostics;
};

// Options threaded through the block-maximum pipeline estimators.
struct PipelineOptions {
    std::size_t grid_points = 15;
    std::size_t subsamples = 600;
    std::uint64_t seed = 42;
    ModeConfig mode_config{};
};

// Closed-form / regression estimators on the tail sample.
TailIndexEstimate hill(const TailSample& tail);
TailIndexEstimate mle(const TailSample& tail);
TailIndexEstimate least_squares(const TailSample& tail);
TailIndexEstimate weighted_least_squares(const TailSample& tail);
TailIndexEstimate percentiles(const TailSample& tail);
TailIndexEstimate modified_percentiles(const TailSample& tail);
TailIndexEstimate geometric_percentiles(const TailSample& tail);
TailIndexEstimate moments(const TailSample& tail);

// Block-maximum pipeline estimators: subsample maxima on a log grid of block
// sizes inside the tail sample, reduce each size to a mode (mpmr) or mean
// (emr), and invert the fitted scaling exponent.
TailIndexEstimate mpmr_ti(const TailSample& tail, const PipelineOptions& options = {});
TailIndexEstimate emr_ti(const TailSample& tail, const PipelineOptions& options = {});

// Dispatch by enum; pipeline options are ignored by the closed-form methods.
TailIndexEstimate estimate(Estimator method, const TailSample& tail,
                           const PipelineOptions& options = {});

// Slope machinery shared by the CCDF regressions, exposed so equal-weight
// reduction can be checked directly: fits log CCDF (midpoint plotting
// positions) against log value with the given per-point weights and returns
// the slope.
double ccdf_loglog_slope(const TailSample& tail, std::span<const double> weights);

}  // namespace tailrisk
