#include "tailrisk/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "tailrisk/errors.hpp"
#include "tailrisk/parallel.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {

std::size_t raw_size_for(std::size_t effective_size, double tail_fraction) {
    if (!(tail_fraction > 0.0) || !(tail_fraction <= 1.0)) {
        throw std::invalid_argument("raw_size_for: tail_fraction must lie in (0, 1]");
    }
    if (effective_size < 2) {
        throw std::invalid_argument("raw_size_for: effective size must be >= 2");
    }
    const double target = static_cast<double>(effective_size) / tail_fraction;
    const double snapped = std::nearbyint(target);
    if (std::abs(target - snapped) <= 1e-9 * std::max(1.0, std::abs(target))) {
        return static_cast<std::size_t>(snapped);
    }
    return static_cast<std::size_t>(std::ceil(target));
}

namespace {

void validate(const SimConfig& config) {
    if (config.family != Family::student_t && config.family != Family::pareto) {
        throw std::invalid_argument(
            "run_study: only student-t and pareto populations have a known tail index");
    }
    if (config.tail_indices.empty()) {
        throw std::invalid_argument("run_study: no tail indices configured");
    }
    for (double xi : config.tail_indices) {
        if (!(xi > 0.0)) throw std::invalid_argument("run_study: tail indices must be positive");
    }
    if (config.effective_sizes.empty()) {
        throw std::invalid_argument("run_study: no effective sizes configured");
    }
    if (config.replications < 2) {
        throw std::invalid_argument("run_study: need at least 2 replications");
    }
    if (config.estimators.empty()) {
        throw std::invalid_argument("run_study: no estimators configured");
    }
    if (!(config.pareto_scale > 0.0)) {
        throw std::invalid_argument("run_study: pareto scale must be positive");
    }
}

}  // namespace

SimSummary run_study(const SimConfig& config) {
    validate(config);

    SimSummary summary;
    summary.config = config;

    for (double xi : config.tail_indices) {
        const DistributionSpec population = config.family == Family::student_t
                                                ? DistributionSpec::student_t(xi)
                                                : DistributionSpec::pareto(config.pareto_scale, xi);
        for (std::size_t N : config.effective_sizes) {
            const std::size_t raw_n = raw_size_for(N, config.tail_fraction);

            // results[e][r]: estimate of estimator e in replication r, or
            // nullopt for a recorded failure. Pre-sized so threads only touch
            // their own replication column.
            std::vector<std::vector<std::optional<double>>> results(
                config.estimators.size(),
                std::vector<std::optional<double>>(config.replications));

            parallel_for(config.replications, [&](std::size_t r) {
                const std::uint64_t rep_seed =
                    derive_seed(config.base_seed, seed_tag(xi), N, r);
                const std::vector<double> raw = sample(population, raw_n, rep_seed);
                for (std::size_t e = 0; e < config.estimators.size(); ++e) {
                    try {
                        const TailSample tail = make_tail_sample(raw, config.tail_fraction);
                        PipelineOptions opts = config.pipeline;
                        opts.seed = derive_seed(rep_seed, 1000 + e);
                        results[e][r] =
                            estimate(config.estimators[e], tail, opts).xi_hat;
                    } catch (const EstimatorError&) {
                        results[e][r] = std::nullopt;
                    } catch (const std::domain_error&) {
                        results[e][r] = std::nullopt;  // unusable tail sample
                    }
                }
            });

            for (std::size_t e = 0; e < config.estimators.size(); ++e) {
                SimCell cell;
                cell.method = config.estimators[e];
                cell.effective_size = N;
                cell.tail_index = xi;
                double sum = 0.0, ape = 0.0;
                for (const auto& est : results[e]) {
                    if (est) {
                        ++cell.successes;
                        sum += *est;
                        ape += std::abs(*est - xi) / xi;
                    } else {
                        ++cell.failures;
                    }
                }
                if (cell.successes > 0) {
                    cell.mean = sum / static_cast<double>(cell.successes);
                    cell.mape = ape / static_cast<double>(cell.successes);
                    double ss = 0.0;
                    for (const auto& est : results[e]) {
                        if (est) ss += (*est - cell.mean) * (*est - cell.mean);
                    }
                    cell.sd = cell.successes > 1
                                  ? std::sqrt(ss / static_cast<double>(cell.successes - 1))
                                  : 0.0;
                }
                summary.cells.push_back(cell);
            }
        }
    }

    std::sort(summary.cells.begin(), summary.cells.end(),
              [](const SimCell& a, const SimCell& b) {
                  if (a.tail_index != b.tail_index) return a.tail_index < b.tail_index;
                  if (a.effective_size != b.effective_size) {
                      return a.effective_size < b.effective_size;
                  }
                  return estimator_name(a.method) < estimator_name(b.method);
              });
    return summary;
}

}  // namespace tailrisk
