#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tailrisk/root_finding.hpp"

using namespace tailrisk;

TEST_CASE("find_root locates simple roots") {
    CHECK(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(find_root([](double x) { return std::cos(x); }, 0.0, 3.0) ==
          doctest::Approx(std::acos(0.0)).epsilon(1e-12));
}

TEST_CASE("find_root returns exact endpoint zeros") {
    CHECK(find_root([](double x) { return x; }, 0.0, 1.0) == 0.0);
    CHECK(find_root([](double x) { return x - 1.0; }, 0.0, 1.0) == 1.0);
}

TEST_CASE("find_root rejects brackets without a sign change") {
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(find_root([](double) { return std::nan(""); }, 0.0, 1.0),
                    std::domain_error);
}

TEST_CASE("find_root handles steep and flat functions") {
    // Steep: exp(40 x) - 1 has its root at 0 inside [-1, 2].
    CHECK(std::abs(find_root([](double x) { return std::expm1(40.0 * x); }, -1.0, 2.0,
                             1e-12, 1e-15)) <= 1e-12);
    // Flat near the root: (x - 3)^3.
    const double r = find_root([](double x) { return std::pow(x - 3.0, 3.0); }, 0.0, 10.0);
    CHECK(r == doctest::Approx(3.0).epsilon(1e-5));
}
