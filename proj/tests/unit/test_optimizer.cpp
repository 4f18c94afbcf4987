#include <catch_amalgamated.hpp>
#include <cmath>

#include "condevt/nelder_mead.hpp"

using namespace condevt;
using Catch::Matchers::WithinAbs;

TEST_CASE("nelder-mead minimises a quadratic", "[optimizer]") {
    auto f = [](std::span<const double> x) { return (x[0] - 1.0) * (x[0] - 1.0) + 3.0 * (x[1] + 2.0) * (x[1] + 2.0); };
    const auto r = nelder_mead(f, {0.0, 0.0}, {2000, 1e-14, {}});
    CHECK(r.converged);
    CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-5));
    CHECK_THAT(r.x[1], WithinAbs(-2.0, 1e-5));
}

TEST_CASE("nelder-mead on the Rosenbrock valley", "[optimizer]") {
    auto f = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto r = nelder_mead(f, {-1.2, 1.0}, {5000, 1e-16, {}});
    CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-3));
    CHECK_THAT(r.x[1], WithinAbs(1.0, 2e-3));
}

TEST_CASE("non-finite objective values repel the simplex", "[optimizer]") {
    auto f = [](std::span<const double> x) { return x[0] < 0.5 ? std::nan("") : (x[0] - 2.0) * (x[0] - 2.0); };
    const auto r = nelder_mead(f, {3.0}, {1000, 1e-14, {}});
    CHECK(std::isfinite(r.value));
    CHECK_THAT(r.x[0], WithinAbs(2.0, 1e-5));
}

TEST_CASE("nelder-mead argument checks", "[optimizer]") {
    auto f = [](std::span<const double> x) { return x[0]; };
    CHECK_THROWS_AS(nelder_mead(f, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(nelder_mead(f, {1.0}, {100, 1e-9, {1.0, 2.0}}), std::invalid_argument);
    const auto r = nelder_mead(f, {0.0}, {7, 1e-30, {}});
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 7);
}
