#include <catch_amalgamated.hpp>
#include <cmath>

#include "condevt/normal.hpp"

using namespace condevt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normal quantile at reference points", "[normal]") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK_THAT(normal_quantile(0.975), WithinAbs(1.959963984540054, 1e-14));
    CHECK_THAT(normal_quantile(0.95), WithinAbs(1.6448536269514722, 1e-14));
    CHECK_THAT(normal_quantile(0.995), WithinAbs(2.5758293035489004, 1e-14));
    CHECK_THAT(normal_quantile(1e-10), WithinRel(-6.361340902404056, 1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(-0.1), std::invalid_argument);
}

TEST_CASE("normal quantile inverts the cdf", "[normal]") {
    for (double p = 1e-6; p < 1.0; p += 0.0137) {
        CHECK_THAT(normal_cdf(normal_quantile(p)), WithinRel(p, 1e-9));
    }
    for (double x = 1.0; x < 30.0; x += 0.5) {
        CHECK_THAT(-normal_quantile(normal_sf(x)), WithinRel(x, 1e-9));
    }
}

TEST_CASE("normal cdf and survival function", "[normal]") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK_THAT(normal_sf(2.0), WithinAbs(0.022750131948179195, 1e-16));
    CHECK_THAT(normal_cdf(-2.0), WithinRel(normal_sf(2.0), 1e-14));
    CHECK(normal_sf(37.0) > 0.0);
    CHECK_THAT(normal_sf(8.0), WithinRel(6.220960574271819e-16, 1e-10));
}
