#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailrisk/simulation.hpp"

using namespace tailrisk;

namespace {
SimConfig tiny_config() {
    SimConfig cfg;
    cfg.family = Family::pareto;
    cfg.tail_indices = {2.0};
    cfg.effective_sizes = {100};
    cfg.tail_fraction = 0.1;
    cfg.replications = 8;
    cfg.estimators = {Estimator::hill, Estimator::percentiles, Estimator::moments};
    cfg.base_seed = 99;
    cfg.pipeline.grid_points = 6;
    cfg.pipeline.subsamples = 40;
    return cfg;
}
}  // namespace

TEST_CASE("raw size inverts the tail fraction with the integer snap") {
    CHECK(raw_size_for(1000, 0.1) == 10000);
    CHECK(raw_size_for(60, 0.1) == 600);
    CHECK(raw_size_for(100, 0.3) == 334);  // 333.33 rounds up
    CHECK(raw_size_for(7, 1.0) == 7);
    CHECK_THROWS_AS(raw_size_for(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(raw_size_for(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(raw_size_for(10, 1.5), std::invalid_argument);
}

TEST_CASE("study results are reproducible and fully aggregated") {
    const auto cfg = tiny_config();
    const auto a = run_study(cfg);
    const auto b = run_study(cfg);
    REQUIRE(a.cells.size() == 3);  // one per estimator
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].mean == b.cells[i].mean);
        CHECK(a.cells[i].sd == b.cells[i].sd);
        CHECK(a.cells[i].mape == b.cells[i].mape);
        CHECK(a.cells[i].successes == b.cells[i].successes);
        CHECK(a.cells[i].successes + a.cells[i].failures == cfg.replications);
        CHECK(a.cells[i].effective_size == 100);
        CHECK(a.cells[i].tail_index == 2.0);
    }
    // A different base seed moves the numbers.
    auto moved = cfg;
    moved.base_seed = 100;
    const auto c = run_study(moved);
    CHECK(c.cells[0].mean != a.cells[0].mean);
}

TEST_CASE("cells are sorted by tail index, size, then method name") {
    SimConfig cfg = tiny_config();
    cfg.tail_indices = {3.0, 2.0};
    cfg.effective_sizes = {80, 40};
    cfg.replications = 3;
    cfg.estimators = {Estimator::mle, Estimator::hill};
    const auto s = run_study(cfg);
    REQUIRE(s.cells.size() == 8);
    const auto before = [](const SimCell& x, const SimCell& y) {
        if (x.tail_index != y.tail_index) return x.tail_index < y.tail_index;
        if (x.effective_size != y.effective_size) return x.effective_size < y.effective_size;
        return estimator_name(x.method) < estimator_name(y.method);
    };
    CHECK(std::is_sorted(s.cells.begin(), s.cells.end(), before));
    CHECK(s.cells.front().tail_index == 2.0);
    CHECK(s.cells.front().effective_size == 40);
    CHECK(s.cells.front().method == Estimator::hill);
}

TEST_CASE("estimates aggregate sensibly on an easy pareto cell") {
    SimConfig cfg = tiny_config();
    cfg.effective_sizes = {400};
    cfg.replications = 12;
    cfg.estimators = {Estimator::hill};
    const auto s = run_study(cfg);
    REQUIRE(s.cells.size() == 1);
    const auto& cell = s.cells[0];
    CHECK(cell.successes == 12);
    CHECK(cell.failures == 0);
    // Hill on 400 genuine Pareto tail values: a few percent of the truth.
    CHECK(std::abs(cell.mean / 2.0 - 1.0) < 0.15);
    CHECK(cell.sd > 0.0);
    CHECK(cell.sd < 0.5);
    CHECK(cell.mape < 0.2);
    CHECK(cell.mape > 0.0);
}

TEST_CASE("study validates its configuration") {
    SimConfig cfg = tiny_config();
    cfg.family = Family::normal;  // no power-law tail to recover
    CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);

    cfg = tiny_config();
    cfg.replications = 1;
    CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);

    cfg = tiny_config();
    cfg.tail_indices = {};
    CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);

    cfg = tiny_config();
    cfg.tail_indices = {-1.0};
    CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);

    cfg = tiny_config();
    cfg.effective_sizes = {};
    CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);

    cfg = tiny_config();
    cfg.estimators = {};
    CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
}

TEST_CASE("student-t studies run end to end") {
    SimConfig cfg;
    cfg.family = Family::student_t;
    cfg.tail_indices = {3.0};
    cfg.effective_sizes = {60};
    cfg.replications = 4;
    cfg.estimators = {Estimator::hill, Estimator::emr};
    cfg.base_seed = 7;
    cfg.pipeline.grid_points = 5;
    cfg.pipeline.subsamples = 30;
    const auto s = run_study(cfg);
    REQUIRE(s.cells.size() == 2);
    for (const auto& cell : s.cells) {
        CHECK(cell.successes + cell.failures == 4);
        CHECK(cell.successes >= 1);
        CHECK(std::isfinite(cell.mean));
    }
}
