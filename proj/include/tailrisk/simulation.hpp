#pragma once

#include <cstdint>
#include <vector>

#include "tailrisk/distributions.hpp"
#include "tailrisk/tail_estimators.hpp"

namespace tailrisk {

// One Monte Carlo study: for every (tail index, effective size) cell, draw
// replications raw samples, reduce each to its upper tail, and run every
// configured estimator on that tail.
struct SimConfig {
    Family family = Family::student_t;       // student_t or pareto
    double pareto_scale = 1.0;               // used when family == pareto
    std::vector<double> tail_indices;        // true xi (degrees of freedom for student_t)
    std::vector<std::size_t> effective_sizes;  // tail sample sizes N
    double tail_fraction = 0.1;
    std::size_t replications = 200;
    std::vector<Estimator> estimators = all_estimators();
    std::uint64_t base_seed = 42;
    PipelineOptions pipeline{};
};

// Aggregates over the successful replications of one (method, N, xi) cell.
struct SimCell {
    Estimator method = Estimator::hill;
    std::size_t effective_size = 0;
    double tail_index = 0.0;   // true value
    std::size_t successes = 0;
    std::size_t failures = 0;
    double mean = 0.0;         // mean of xi_hat
    double sd = 0.0;           // sample sd of xi_hat (0 when successes < 2)
    double mape = 0.0;         // mean |xi_hat - xi| / xi
};

struct SimSummary {
    SimConfig config;
    std::vector<SimCell> cells;  // sorted by (tail_index, effective_size, method name)
};

// Raw sample size implied by an effective tail size: ceil(N / tail_fraction),
// with the same integer snap used by make_tail_sample.
std::size_t raw_size_for(std::size_t effective_size, double tail_fraction);

// Runs the study. Replication r of cell (xi, N) draws its sample from seed
// derive_seed(base_seed, bits(xi), N, r), so any subset of cells can be
// reproduced in isolation and results do not depend on scheduling.
SimSummary run_study(const SimConfig& config);

}  // namespace tailrisk
