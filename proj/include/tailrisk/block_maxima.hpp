#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tailrisk {

// Block sizes n at which maxima are collected. Subsampling is done without
// replacement, so n can be at most floor(N * (1 - 1/e)): beyond that point
// distinct subsets overlap so heavily that their maxima are nearly all equal
// to the sample maximum and carry no scaling information.
struct BlockGrid {
    std::vector<std::size_t> sizes;  // strictly increasing
};

inline constexpr double subsample_ratio = 0.6321205588285577;  // 1 - 1/e

// floor(N * (1 - 1/e)); throws if the result would be < 1 (N < 2).
std::size_t max_block_size(std::size_t raw_size);

// point_count log-spaced integers spanning [1, max_block_size(raw_size)],
// deduplicated after rounding, endpoints always present. point_count >= 2.
BlockGrid make_grid(std::size_t raw_size, std::size_t point_count);

// Same, but the largest block size is additionally capped at max_block:
// beyond a few thousand draws per block the maxima stop moving while the
// subsampling cost keeps growing, so huge catalogs use a ceiling.
BlockGrid make_grid_bounded(std::size_t raw_size, std::size_t point_count,
                            std::size_t max_block);

inline constexpr std::size_t default_grid_points = 15;
inline constexpr std::size_t default_subsamples = 600;

// m maxima of random n-subsets of raw, drawn without replacement via partial
// Fisher-Yates over a persistent index array (O(n) per draw, no allocation
// per replicate). Deterministic given seed.
std::vector<double> subsample_maxima(std::span<const double> raw, std::size_t n,
                                     std::size_t m, std::uint64_t seed);

struct BlockMaxima {
    BlockGrid grid;
    std::vector<std::vector<double>> maxima;  // maxima[i] has subsample_count entries for grid.sizes[i]
    std::size_t subsample_count = 0;
    std::uint64_t seed = 0;
};

// Runs subsample_maxima for every grid size. Each size gets its own seed
// derived from (seed, n), so results do not depend on evaluation order and
// the per-size streams stay decoupled under threading.
BlockMaxima collect_block_maxima(std::span<const double> raw, const BlockGrid& grid,
                                 std::size_t m, std::uint64_t seed);

// Checks a raw sample before subsampling: at least 2 values, all finite.
void validate_raw_sample(std::span<const double> raw);

}  // namespace tailrisk
