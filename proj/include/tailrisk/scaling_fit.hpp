#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tailrisk/block_maxima.hpp"
#include "tailrisk/distributions.hpp"
#include "tailrisk/mode_estimation.hpp"

namespace tailrisk {

enum class FitSource { mpmr, emr, pooled_bm };

std::string fit_source_name(FitSource s);

// Power-law fit v ~ exp(log_prefactor) * n^eta obtained by least squares on
// (log n, log v). ti is the implied tail index 1/eta.
struct ScalingFit {
    double eta = 0.0;
    double log_prefactor = 0.0;
    double ti = 0.0;
    double slope_stderr = 0.0;  // 0 when only two points enter the fit
    double r_squared = 0.0;
    FitSource source = FitSource::mpmr;
};

struct SeriesPoint {
    std::size_t n = 0;
    double value = 0.0;
};

// OLS on (log n, log value). Requires every value positive and at least two
// distinct n. Throws std::domain_error on a zero slope (tail index undefined).
ScalingFit fit_loglog(std::span<const SeriesPoint> points, FitSource source);

// Per-size KDE modes of the block maxima. A size whose mode estimate fails
// (no convergence) is dropped from the series; its n is appended to *skipped
// when provided.
std::vector<SeriesPoint> mpmr_series(const BlockMaxima& bm, const ModeConfig& config = {},
                                     std::vector<std::size_t>* skipped = nullptr);

// Per-size means of the block maxima.
std::vector<SeriesPoint> emr_series(const BlockMaxima& bm);

// Pooled regression over every (n, maximum) pair. Non-positive maxima cannot
// enter a log fit: they are dropped when rarer than 1% of the pool (count
// reported via *dropped) and abort the fit otherwise.
ScalingFit fit_pooled_bm(const BlockMaxima& bm, std::size_t* dropped = nullptr);

enum class ModeCondition {
    exact,    // f'(s) F(s) + (n-1) f(s)^2 = 0
    large_n,  // f'(s) + n f(s)^2 = 0
};

// Root of the chosen block-maximum mode condition on [lo, hi], located to
// 1e-10 relative accuracy. The bracket must straddle the root.
double numeric_mpmr(const std::function<double(double)>& density,
                    const std::function<double(double)>& density_derivative,
                    const std::function<double(double)>& distribution,
                    std::size_t n, double lo, double hi,
                    ModeCondition condition = ModeCondition::exact);

// Same, with the bracket built from the family: lower support edge (or -8
// sigma-equivalents for unbounded families) up to quantile(1 - 1/(10 n)).
double numeric_mpmr(const DistributionSpec& d, std::size_t n,
                    ModeCondition condition = ModeCondition::exact);

// exp(log_prefactor) * n^eta at a (possibly extrapolated) block size n > 0.
double extrapolate(const ScalingFit& fit, double n);

}  // namespace tailrisk
