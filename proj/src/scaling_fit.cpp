#include "tailrisk/scaling_fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tailrisk/root_finding.hpp"

namespace tailrisk {

std::string fit_source_name(FitSource s) {
    switch (s) {
        case FitSource::mpmr: return "mpmr";
        case FitSource::emr: return "emr";
        case FitSource::pooled_bm: return "pooled-bm";
    }
    throw std::logic_error("fit_source_name: bad enum value");
}

ScalingFit fit_loglog(std::span<const SeriesPoint> points, FitSource source) {
    if (points.size() < 2) {
        throw std::invalid_argument("fit_loglog: need at least 2 points");
    }
    std::set<std::size_t> distinct;
    for (const auto& pt : points) {
        if (pt.n < 1) throw std::invalid_argument("fit_loglog: block sizes must be >= 1");
        if (!(pt.value > 0.0) || !std::isfinite(pt.value)) {
            throw std::domain_error("fit_loglog: values must be positive and finite (n=" +
                                    std::to_string(pt.n) + " has value " +
                                    std::to_string(pt.value) + ")");
        }
        distinct.insert(pt.n);
    }
    if (distinct.size() < 2) {
        throw std::domain_error("fit_loglog: need at least 2 distinct block sizes");
    }

    const double m = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& pt : points) {
        sx += std::log(static_cast<double>(pt.n));
        sy += std::log(pt.value);
    }
    const double xbar = sx / m, ybar = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& pt : points) {
        const double dx = std::log(static_cast<double>(pt.n)) - xbar;
        const double dy = std::log(pt.value) - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    ScalingFit fit;
    fit.source = source;
    fit.eta = sxy / sxx;
    fit.log_prefactor = ybar - fit.eta * xbar;
    if (fit.eta == 0.0) {
        throw std::domain_error("fit_loglog: zero slope, tail index undefined");
    }
    fit.ti = 1.0 / fit.eta;

    // SSR from explicit residuals: the shortcut syy - eta * sxy cancels
    // catastrophically when the fit is near-exact and would report a stderr
    // orders of magnitude above the true rounding floor.
    double ssr = 0.0;
    for (const auto& pt : points) {
        const double r = std::log(pt.value) -
                         (fit.log_prefactor + fit.eta * std::log(static_cast<double>(pt.n)));
        ssr += r * r;
    }
    fit.slope_stderr = points.size() > 2
                           ? std::sqrt(ssr / ((m - 2.0) * sxx))
                           : 0.0;
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

std::vector<SeriesPoint> mpmr_series(const BlockMaxima& bm, const ModeConfig& config,
                                     std::vector<std::size_t>* skipped) {
    std::vector<SeriesPoint> out;
    out.reserve(bm.grid.sizes.size());
    for (std::size_t i = 0; i < bm.grid.sizes.size(); ++i) {
        const std::size_t n = bm.grid.sizes[i];
        try {
            const ModeResult res = mean_shift_mode(bm.maxima[i], config);
            if (!res.converged || !std::isfinite(res.mode)) {
                if (skipped) skipped->push_back(n);
                continue;
            }
            out.push_back({n, res.mode});
        } catch (const std::exception&) {
            if (skipped) skipped->push_back(n);
        }
    }
    return out;
}

std::vector<SeriesPoint> emr_series(const BlockMaxima& bm) {
    std::vector<SeriesPoint> out;
    out.reserve(bm.grid.sizes.size());
    for (std::size_t i = 0; i < bm.grid.sizes.size(); ++i) {
        double mean = 0.0;
        for (double v : bm.maxima[i]) mean += v;
        mean /= static_cast<double>(bm.maxima[i].size());
        out.push_back({bm.grid.sizes[i], mean});
    }
    return out;
}

ScalingFit fit_pooled_bm(const BlockMaxima& bm, std::size_t* dropped) {
    std::vector<SeriesPoint> pool;
    std::size_t non_positive = 0, total = 0;
    for (std::size_t i = 0; i < bm.grid.sizes.size(); ++i) {
        for (double v : bm.maxima[i]) {
            ++total;
            if (v > 0.0) {
                pool.push_back({bm.grid.sizes[i], v});
            } else {
                ++non_positive;
            }
        }
    }
    if (total == 0) throw std::invalid_argument("fit_pooled_bm: no maxima collected");
    if (non_positive > 0 &&
        static_cast<double>(non_positive) > 0.01 * static_cast<double>(total)) {
        throw std::domain_error("fit_pooled_bm: " + std::to_string(non_positive) + " of " +
                                std::to_string(total) +
                                " maxima are non-positive; log fit is meaningless");
    }
    if (dropped) *dropped = non_positive;
    return fit_loglog(pool, FitSource::pooled_bm);
}

double numeric_mpmr(const std::function<double(double)>& density,
                    const std::function<double(double)>& density_derivative,
                    const std::function<double(double)>& distribution,
                    std::size_t n, double lo, double hi, ModeCondition condition) {
    if (n < 1) throw std::invalid_argument("numeric_mpmr: block size must be >= 1");
    const double nd = static_cast<double>(n);
    auto residual = [&](double s) {
        const double f = density(s);
        const double fp = density_derivative(s);
        if (condition == ModeCondition::large_n) return fp + nd * f * f;
        return fp * distribution(s) + (nd - 1.0) * f * f;
    };
    // Roots at or near zero need an absolute floor; tie it to the bracket
    // scale so it stays far below the relative tolerance everywhere else.
    const double abs_tol = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return find_root(residual, lo, hi, 1e-10, abs_tol, 300);
}

double numeric_mpmr(const DistributionSpec& d, std::size_t n, ModeCondition condition) {
    if (n < 1) throw std::invalid_argument("numeric_mpmr: block size must be >= 1");
    const double nd = static_cast<double>(n);
    // Upper end: the mode of the maximum sits well below the 1 - 1/(10n)
    // quantile, where the mode condition has already turned negative.
    const double hi = quantile(d, 1.0 - 1.0 / (10.0 * nd));
    double lo = d.support_lower();
    if (!std::isfinite(lo)) {
        // Unbounded support: both terms of the mode condition are positive
        // everywhere left of zero, so any moderately deep negative point
        // brackets the root from below.
        lo = d.family() == Family::normal ? -8.0 * d.sigma()
                                          : -8.0 * (std::sqrt(d.nu()) + 1.0);
    }
    return numeric_mpmr([&](double s) { return pdf(d, s); },
                        [&](double s) { return pdf_derivative(d, s); },
                        [&](double s) { return cdf(d, s); }, n, lo, hi, condition);
}

double extrapolate(const ScalingFit& fit, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("extrapolate: n must be positive");
    return std::exp(fit.log_prefactor + fit.eta * std::log(n));
}

}  // namespace tailrisk
