#include "tailrisk/tail_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailrisk/block_maxima.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/scaling_fit.hpp"
#include "tailrisk/special_functions.hpp"

namespace tailrisk {

std::string estimator_name(Estimator e) {
    switch (e) {
        case Estimator::mpmr: return "mpmr";
        case Estimator::emr: return "emr";
        case Estimator::hill: return "hill";
        case Estimator::least_squares: return "least-squares";
        case Estimator::weighted_least_squares: return "weighted-least-squares";
        case Estimator::percentiles: return "percentiles";
        case Estimator::modified_percentiles: return "modified-percentiles";
        case Estimator::geometric_percentiles: return "geometric-percentiles";
        case Estimator::mle: return "mle";
        case Estimator::moments: return "moments";
    }
    throw std::logic_error("estimator_name: bad enum value");
}

Estimator estimator_from_name(const std::string& name) {
    for (Estimator e : all_estimators()) {
        if (estimator_name(e) == name) return e;
    }
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

std::vector<Estimator> all_estimators() {
    return {Estimator::mpmr,
            Estimator::emr,
            Estimator::hill,
            Estimator::least_squares,
            Estimator::weighted_least_squares,
            Estimator::percentiles,
            Estimator::modified_percentiles,
            Estimator::geometric_percentiles,
            Estimator::mle,
            Estimator::moments};
}

TailSample make_tail_sample(std::span<const double> raw, double tail_fraction) {
    if (!(tail_fraction > 0.0) || !(tail_fraction <= 1.0)) {
        throw std::invalid_argument("make_tail_sample: tail_fraction must lie in (0, 1]");
    }
    if (raw.size() < 2) {
        throw std::domain_error("make_tail_sample: need at least 2 raw values");
    }
    for (double v : raw) {
        if (!std::isfinite(v)) {
            throw std::domain_error("make_tail_sample: raw sample has a non-finite value");
        }
    }
    // ceil with a snap for products like 0.1 * 600 that land an ulp above an
    // integer: treat anything within 1e-9 (relative) of an integer as exact.
    const double target = tail_fraction * static_cast<double>(raw.size());
    const double snapped = std::nearbyint(target);
    const std::size_t keep =
        std::abs(target - snapped) <= 1e-9 * std::max(1.0, std::abs(target))
            ? static_cast<std::size_t>(snapped)
            : static_cast<std::size_t>(std::ceil(target));

    if (keep < 2) {
        throw std::domain_error("make_tail_sample: tail fraction keeps fewer than 2 values");
    }
    std::vector<double> sorted(raw.begin(), raw.end());
    std::sort(sorted.begin(), sorted.end());
    TailSample tail;
    tail.values.assign(sorted.end() - static_cast<std::ptrdiff_t>(keep), sorted.end());
    if (!(tail.values.front() > 0.0)) {
        throw std::domain_error(
            "make_tail_sample: tail contains non-positive values; estimators need a "
            "strictly positive tail");
    }
    tail.threshold = tail.values.front();
    return tail;
}

namespace {

void require_tail(const TailSample& tail, std::size_t min_count, const char* who) {
    if (tail.values.size() < min_count) {
        throw EstimatorError(std::string(who) + ": needs at least " +
                             std::to_string(min_count) + " tail values, got " +
                             std::to_string(tail.values.size()));
    }
    if (!(tail.threshold > 0.0)) {
        throw EstimatorError(std::string(who) + ": threshold must be positive");
    }
}

double finish(double xi_hat, const char* who) {
    if (!std::isfinite(xi_hat) || !(xi_hat > 0.0)) {
        throw EstimatorError(std::string(who) + ": produced non-positive tail index " +
                             std::to_string(xi_hat));
    }
    return xi_hat;
}

// Sum of log(x_i / threshold) over the whole tail sample.
double log_excess_sum(const TailSample& tail) {
    double s = 0.0;
    for (double v : tail.values) s += std::log(v / tail.threshold);
    return s;
}

// Order-statistic anchor for a nominal percentile: index i (1-based) closest
// to p (count + 1), together with its realized plotting position i/(count+1).
struct Anchor {
    std::size_t index;   // 1-based
    double position;     // realized percentile of that order statistic
    double value;
};

Anchor anchor_at(const TailSample& tail, double p) {
    const double count = static_cast<double>(tail.values.size());
    auto i = static_cast<std::size_t>(std::llround(p * (count + 1.0)));
    i = std::clamp<std::size_t>(i, 1, tail.values.size());
    return {i, static_cast<double>(i) / (count + 1.0), tail.values[i - 1]};
}

}  // namespace

TailIndexEstimate hill(const TailSample& tail) {
    require_tail(tail, 2, "hill");
    const double k = static_cast<double>(tail.values.size() - 1);
    const double denom = log_excess_sum(tail);  // the threshold term is zero
    if (!(denom > 0.0)) {
        throw EstimatorError("hill: zero log-excess spread (all tail values equal?)");
    }
    TailIndexEstimate out;
    out.method = Estimator::hill;
    out.xi_hat = finish(k / denom, "hill");
    out.diagnostics["order_statistics"] = k;
    return out;
}

TailIndexEstimate mle(const TailSample& tail) {
    require_tail(tail, 2, "mle");
    const double denom = log_excess_sum(tail);
    if (!(denom > 0.0)) {
        throw EstimatorError("mle: zero log-excess spread (all tail values equal?)");
    }
    TailIndexEstimate out;
    out.method = Estimator::mle;
    out.xi_hat = finish(static_cast<double>(tail.values.size()) / denom, "mle");
    return out;
}

double ccdf_loglog_slope(const TailSample& tail, std::span<const double> weights) {
    if (weights.size() != tail.values.size()) {
        throw std::invalid_argument("ccdf_loglog_slope: one weight per tail value");
    }
    const double count = static_cast<double>(tail.values.size());
    double wsum = 0.0, xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < tail.values.size(); ++i) {
        if (!(weights[i] >= 0.0)) {
            throw std::invalid_argument("ccdf_loglog_slope: weights must be non-negative");
        }
        // Midpoint plotting position: rank i+1 (ascending) leaves
        // count - (i+1) + 0.5 exceedances out of count.
        const double ccdf = (count - static_cast<double>(i + 1) + 0.5) / count;
        wsum += weights[i];
        xbar += weights[i] * std::log(tail.values[i]);
        ybar += weights[i] * std::log(ccdf);
    }
    if (!(wsum > 0.0)) throw std::invalid_argument("ccdf_loglog_slope: all weights are zero");
    xbar /= wsum;
    ybar /= wsum;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < tail.values.size(); ++i) {
        const double ccdf = (count - static_cast<double>(i + 1) + 0.5) / count;
        const double dx = std::log(tail.values[i]) - xbar;
        const double dy = std::log(ccdf) - ybar;
        sxx += weights[i] * dx * dx;
        sxy += weights[i] * dx * dy;
    }
    if (!(sxx > 0.0)) {
        throw EstimatorError("ccdf regression: no spread in tail values");
    }
    return sxy / sxx;
}

TailIndexEstimate least_squares(const TailSample& tail) {
    require_tail(tail, 3, "least-squares");
    const std::vector<double> weights(tail.values.size(), 1.0);
    const double slope = ccdf_loglog_slope(tail, weights);
    TailIndexEstimate out;
    out.method = Estimator::least_squares;
    out.xi_hat = finish(-slope, "least-squares");
    return out;
}

TailIndexEstimate weighted_least_squares(const TailSample& tail) {
    require_tail(tail, 3, "weighted-least-squares");
    // Weight each point by its exceedance count: deep-tail points, whose
    // plotting positions are noisiest, carry the least weight.
    std::vector<double> weights(tail.values.size());
    const double count = static_cast<double>(tail.values.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = count - static_cast<double>(i + 1) + 0.5;
    }
    const double slope = ccdf_loglog_slope(tail, weights);
    TailIndexEstimate out;
    out.method = Estimator::weighted_least_squares;
    out.xi_hat = finish(-slope, "weighted-least-squares");
    return out;
}

TailIndexEstimate percentiles(const TailSample& tail) {
    require_tail(tail, 4, "percentiles");
    const Anchor lo = anchor_at(tail, 0.25);
    const Anchor hi = anchor_at(tail, 0.75);
    if (!(hi.value > lo.value)) {
        throw EstimatorError("percentiles: anchors are not strictly increasing");
    }
    // Exceedance ratio between the realized anchor positions.
    const double xi_hat = std::log((1.0 - lo.position) / (1.0 - hi.position)) /
                          std::log(hi.value / lo.value);
    TailIndexEstimate out;
    out.method = Estimator::percentiles;
    out.xi_hat = finish(xi_hat, "percentiles");
    return out;
}

TailIndexEstimate modified_percentiles(const TailSample& tail) {
    require_tail(tail, 4, "modified-percentiles");
    // Threshold-anchored variant: the smallest order statistic is the lower
    // anchor, two upper anchors at 0.5 and 0.75 are averaged in slope space.
    const Anchor base{1, 1.0 / (static_cast<double>(tail.values.size()) + 1.0),
                      tail.values.front()};
    double eta_sum = 0.0;
    int used = 0;
    for (double p : {0.5, 0.75}) {
        const Anchor a = anchor_at(tail, p);
        if (!(a.value > base.value)) continue;
        eta_sum += std::log(a.value / base.value) /
                   std::log((1.0 - base.position) / (1.0 - a.position));
        ++used;
    }
    if (used == 0) {
        throw EstimatorError("modified-percentiles: upper anchors do not exceed the threshold");
    }
    TailIndexEstimate out;
    out.method = Estimator::modified_percentiles;
    out.xi_hat = finish(static_cast<double>(used) / eta_sum, "modified-percentiles");
    out.diagnostics["anchors_used"] = used;
    return out;
}

TailIndexEstimate geometric_percentiles(const TailSample& tail) {
    require_tail(tail, 4, "geometric-percentiles");
    const double count = static_cast<double>(tail.values.size());
    const double mean_log = log_excess_sum(tail) / count;
    if (!(mean_log > 0.0)) {
        throw EstimatorError("geometric-percentiles: zero log-excess spread");
    }
    // Mean log-excess of an exact power-law grid is kappa / xi with
    // kappa = log(count) - log(count!) / count, so kappa calibrates the
    // geometric mean into a tail index without bias on the ideal grid.
    const double kappa = std::log(count) - log_gamma(count + 1.0) / count;
    TailIndexEstimate out;
    out.method = Estimator::geometric_percentiles;
    out.xi_hat = finish(kappa / mean_log, "geometric-percentiles");
    return out;
}

TailIndexEstimate moments(const TailSample& tail) {
    require_tail(tail, 2, "moments");
    double mean = 0.0;
    for (double v : tail.values) mean += v;
    mean /= static_cast<double>(tail.values.size());
    const double excess = mean - tail.threshold;
    if (!(excess > 0.0)) {
        throw EstimatorError("moments: tail mean does not exceed the threshold");
    }
    // Pareto mean identity m = t xi/(xi - 1) inverted. The ratio is always
    // above 1; estimates pinned close to 1 mean the tail average is blowing
    // up, i.e. the true index is at or below 1 and the identity is breaking
    // down, so such results carry a diagnostic flag.
    const double xi_hat = mean / excess;
    TailIndexEstimate out;
    out.method = Estimator::moments;
    out.xi_hat = finish(xi_hat, "moments");
    if (xi_hat < 1.25) out.diagnostics["unreliable"] = 1.0;
    return out;
}

namespace {

TailIndexEstimate pipeline_ti(const TailSample& tail, const PipelineOptions& options,
                              bool use_modes) {
    const char* who = use_modes ? "mpmr" : "emr";
    require_tail(tail, 4, who);
    try {
        const BlockGrid grid = make_grid(tail.values.size(), options.grid_points);
        const BlockMaxima bm =
            collect_block_maxima(tail.values, grid, options.subsamples, options.seed);
        std::vector<std::size_t> skipped;
        const std::vector<SeriesPoint> series =
            use_modes ? mpmr_series(bm, options.mode_config, &skipped) : emr_series(bm);
        const ScalingFit fit =
            fit_loglog(series, use_modes ? FitSource::mpmr : FitSource::emr);

        TailIndexEstimate out;
        out.method = use_modes ? Estimator::mpmr : Estimator::emr;
        out.xi_hat = finish(fit.ti, who);
        out.diagnostics["eta"] = fit.eta;
        out.diagnostics["slope_stderr"] = fit.slope_stderr;
        out.diagnostics["r_squared"] = fit.r_squared;
        out.diagnostics["grid_sizes"] = static_cast<double>(series.size());
        if (use_modes) out.diagnostics["skipped_sizes"] = static_cast<double>(skipped.size());
        return out;
    } catch (const EstimatorError&) {
        throw;
    } catch (const std::exception& e) {
        // Data-driven failures inside the pipeline (degenerate grid, flat
        // series, ...) count as estimator failures for the caller.
        throw EstimatorError(std::string(who) + ": " + e.what());
    }
}

}  // namespace

TailIndexEstimate mpmr_ti(const TailSample& tail, const PipelineOptions& options) {
    return pipeline_ti(tail, options, true);
}

TailIndexEstimate emr_ti(const TailSample& tail, const PipelineOptions& options) {
    return pipeline_ti(tail, options, false);
}

TailIndexEstimate estimate(Estimator method, const TailSample& tail,
                           const PipelineOptions& options) {
    switch (method) {
        case Estimator::mpmr: return mpmr_ti(tail, options);
        case Estimator::emr: return emr_ti(tail, options);
        case Estimator::hill: return hill(tail);
        case Estimator::least_squares: return least_squares(tail);
        case Estimator::weighted_least_squares: return weighted_least_squares(tail);
        case Estimator::percentiles: return percentiles(tail);
        case Estimator::modified_percentiles: return modified_percentiles(tail);
        case Estimator::geometric_percentiles: return geometric_percentiles(tail);
        case Estimator::mle: return mle(tail);
        case Estimator::moments: return moments(tail);
    }
    throw std::logic_error("estimate: bad estimator enum");
}

}  // namespace tailrisk
