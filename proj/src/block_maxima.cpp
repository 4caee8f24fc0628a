#include "tailrisk/block_maxima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tailrisk/parallel.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {

std::size_t max_block_size(std::size_t raw_size) {
    const double cap = std::floor(static_cast<double>(raw_size) * subsample_ratio);
    if (cap < 1.0) {
        throw std::invalid_argument("max_block_size: raw sample of " +
                                    std::to_string(raw_size) +
                                    " values is too small to subsample");
    }
    return static_cast<std::size_t>(cap);
}

BlockGrid make_grid(std::size_t raw_size, std::size_t point_count) {
    return make_grid_bounded(raw_size, point_count,
                             std::numeric_limits<std::size_t>::max());
}

BlockGrid make_grid_bounded(std::size_t raw_size, std::size_t point_count,
                            std::size_t max_block) {
    if (point_count < 2) throw std::invalid_argument("make_grid: need at least 2 grid points");
    if (max_block < 1) throw std::invalid_argument("make_grid: max_block must be >= 1");
    const std::size_t n_max = std::min(max_block_size(raw_size), max_block);

    BlockGrid grid;
    grid.sizes.reserve(point_count);
    const double log_max = std::log(static_cast<double>(n_max));
    for (std::size_t i = 0; i < point_count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(point_count - 1);
        auto n = static_cast<std::size_t>(std::llround(std::exp(t * log_max)));
        n = std::clamp<std::size_t>(n, 1, n_max);
        grid.sizes.push_back(n);
    }
    // Rounding can collide neighbours; endpoints are forced exactly.
    grid.sizes.front() = 1;
    grid.sizes.back() = n_max;
    std::sort(grid.sizes.begin(), grid.sizes.end());
    grid.sizes.erase(std::unique(grid.sizes.begin(), grid.sizes.end()), grid.sizes.end());
    return grid;
}

void validate_raw_sample(std::span<const double> raw) {
    if (raw.size() < 2) {
        throw std::invalid_argument("raw sample must contain at least 2 values");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw std::invalid_argument("raw sample has a non-finite value at position " +
                                        std::to_string(i));
        }
    }
}

std::vector<double> subsample_maxima(std::span<const double> raw, std::size_t n,
                                     std::size_t m, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("subsample_maxima: block size must be >= 1");
    if (n > raw.size()) {
        throw std::invalid_argument("subsample_maxima: block size " + std::to_string(n) +
                                    " exceeds sample size " + std::to_string(raw.size()));
    }
    if (m < 1) throw std::invalid_argument("subsample_maxima: need at least 1 replicate");

    // The index array persists across replicates: each draw only permutes its
    // first n slots, which keeps the whole routine O(m n) instead of O(m N).
    std::vector<std::size_t> idx(raw.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 eng(seed);

    std::vector<double> out;
    out.reserve(m);
    const std::size_t N = raw.size();
    for (std::size_t rep = 0; rep < m; ++rep) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + bounded_uniform(eng, N - i);
            std::swap(idx[i], idx[j]);
            best = std::max(best, raw[idx[i]]);
        }
        out.push_back(best);
    }
    return out;
}

BlockMaxima collect_block_maxima(std::span<const double> raw, const BlockGrid& grid,
                                 std::size_t m, std::uint64_t seed) {
    validate_raw_sample(raw);
    if (grid.sizes.empty()) throw std::invalid_argument("collect_block_maxima: empty grid");
    for (std::size_t i = 1; i < grid.sizes.size(); ++i) {
        if (grid.sizes[i] <= grid.sizes[i - 1]) {
            throw std::invalid_argument("collect_block_maxima: grid must be strictly increasing");
        }
    }
    if (grid.sizes.back() > raw.size()) {
        throw std::invalid_argument("collect_block_maxima: grid exceeds sample size");
    }

    BlockMaxima out;
    out.grid = grid;
    out.subsample_count = m;
    out.seed = seed;
    out.maxima.resize(grid.sizes.size());
    parallel_for(grid.sizes.size(), [&](std::size_t i) {
        const std::size_t n = grid.sizes[i];
        out.maxima[i] = subsample_maxima(raw, n, m, derive_seed(seed, n));
    });
    return out;
}

}  // namespace tailrisk
