#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tailrisk/block_maxima.hpp"
#include "tailrisk/distributions.hpp"
#include "tailrisk/rng.hpp"

using namespace tailrisk;

TEST_CASE("max block size is floor(N(1-1/e))") {
    CHECK(max_block_size(5) == 3);
    CHECK(max_block_size(1000) == 632);
    CHECK(max_block_size(2) == 1);
    CHECK(max_block_size(10000) == 6321);
    CHECK_THROWS_AS(max_block_size(1), std::invalid_argument);
    CHECK_THROWS_AS(max_block_size(0), std::invalid_argument);
}

TEST_CASE("grid spans [1, max block], log-spaced, deduplicated") {
    const auto tiny = make_grid(5, 3);
    CHECK(tiny.sizes == std::vector<std::size_t>{1, 2, 3});

    const auto ends = make_grid(1000, 2);
    CHECK(ends.sizes == std::vector<std::size_t>{1, 632});

    const auto g = make_grid(1000, 15);
    CHECK(g.sizes.front() == 1);
    CHECK(g.sizes.back() == 632);
    CHECK(g.sizes.size() <= 15);
    CHECK(std::is_sorted(g.sizes.begin(), g.sizes.end()));
    CHECK(std::adjacent_find(g.sizes.begin(), g.sizes.end()) == g.sizes.end());

    // Rounding collapses neighbours near 1; endpoints survive anyway.
    const auto dense = make_grid(10, 15);
    CHECK(dense.sizes.front() == 1);
    CHECK(dense.sizes.back() == 6);
    CHECK(dense.sizes.size() <= 6);
    CHECK(std::adjacent_find(dense.sizes.begin(), dense.sizes.end()) == dense.sizes.end());

    CHECK_THROWS_AS(make_grid(1000, 1), std::invalid_argument);
}

TEST_CASE("bounded grid caps the largest block") {
    const auto g = make_grid_bounded(100000, 15, 10000);
    CHECK(g.sizes.back() == 10000);
    CHECK(g.sizes.front() == 1);
    // A cap above the natural maximum changes nothing.
    const auto loose = make_grid_bounded(1000, 15, 100000);
    CHECK(loose.sizes == make_grid(1000, 15).sizes);
}

TEST_CASE("subsample maxima are elements of the raw sample") {
    const auto raw = sample(DistributionSpec::student_t(3.0), 200, 17);
    const auto mx = subsample_maxima(raw, 37, 50, 5);
    REQUIRE(mx.size() == 50);
    for (double v : mx) {
        CHECK(std::find(raw.begin(), raw.end(), v) != raw.end());
    }
    // A full-sample "subsample" always returns the global maximum.
    const auto full = subsample_maxima(raw, raw.size(), 5, 5);
    const double global = *std::max_element(raw.begin(), raw.end());
    for (double v : full) CHECK(v == global);
}

TEST_CASE("subsampling is deterministic in the seed") {
    const auto raw = sample(DistributionSpec::exponential(1.0), 500, 3);
    const auto a = subsample_maxima(raw, 100, 40, 11);
    const auto b = subsample_maxima(raw, 100, 40, 11);
    const auto c = subsample_maxima(raw, 100, 40, 12);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("subsample maxima validation") {
    const std::vector<double> raw = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(subsample_maxima(raw, 0, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(subsample_maxima(raw, 4, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(subsample_maxima(raw, 2, 0, 1), std::invalid_argument);
    const std::vector<double> bad = {1.0, std::nan("")};
    CHECK_THROWS_AS(validate_raw_sample(bad), std::invalid_argument);
    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS(validate_raw_sample(one), std::invalid_argument);
}

TEST_CASE("collect runs every grid size and is order-independent") {
    const auto raw = sample(DistributionSpec::pareto(1.0, 2.0), 400, 9);
    const auto grid = make_grid(raw.size(), 8);
    const auto bm = collect_block_maxima(raw, grid, 30, 77);
    REQUIRE(bm.maxima.size() == grid.sizes.size());
    CHECK(bm.subsample_count == 30);
    CHECK(bm.seed == 77);
    for (const auto& row : bm.maxima) CHECK(row.size() == 30);

    // Per-size streams are derived from (seed, n): collecting one size alone
    // reproduces the same maxima as the full run.
    for (std::size_t i = 0; i < grid.sizes.size(); ++i) {
        const auto solo = subsample_maxima(raw, grid.sizes[i], 30,
                                           derive_seed(77, grid.sizes[i]));
        CHECK(solo == bm.maxima[i]);
    }

    BlockGrid bad{{5, 5, 7}};
    CHECK_THROWS_AS(collect_block_maxima(raw, bad, 30, 77), std::invalid_argument);
}

TEST_CASE("mean block maximum grows with block size") {
    // Average the per-size means over 20 independent populations; the mean
    // of an n-subset maximum is the mean of an n-draw maximum, which is
    // strictly increasing in n (gaps ~ log step >> standard error here).
    const auto grid = make_grid(1000, 15);
    std::vector<double> mean(grid.sizes.size(), 0.0);
    const int pops = 20;
    for (int p = 0; p < pops; ++p) {
        const auto raw =
            sample(DistributionSpec::exponential(1.0), 1000, derive_seed(4242, p));
        const auto bm = collect_block_maxima(raw, grid, 100, derive_seed(99, p));
        for (std::size_t i = 0; i < bm.maxima.size(); ++i) {
            for (double v : bm.maxima[i]) mean[i] += v;
        }
    }
    for (double& v : mean) v /= pops * 100.0;
    for (std::size_t i = 1; i < mean.size(); ++i) {
        CHECK(mean[i] > mean[i - 1]);
    }
}
