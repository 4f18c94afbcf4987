#include <algorithm>
#include <catch_amalgamated.hpp>
#include <cmath>

#include "condevt/errors.hpp"
#include "condevt/tail.hpp"
#include "helpers.hpp"

using namespace condevt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TailSample from_values(std::vector<double> v) {
    TailSample s;
    s.n_total = v.size();
    std::sort(v.begin(), v.end(), std::greater<>());
    s.values = std::move(v);
    return s;
}

// log spacings c/j make every Hill estimate equal to c
TailSample flat_hill_sample(double c, std::size_t n) {
    std::vector<double> y{10.0};
    for (std::size_t j = 1; j < n; ++j) y.push_back(y.back() - c / static_cast<double>(j));
    for (auto& v : y) v = std::exp(v);
    return from_values(y);
}

}  // namespace

TEST_CASE("downside and upside tail samples", "[tail]") {
    const std::vector<double> z{-3.0, 1.0, -2.0};
    const auto down = downside_tail(z);
    CHECK(down.values == std::vector<double>{3.0, 2.0});
    CHECK(down.n_total == 3);
    CHECK(upside_tail(z).values == std::vector<double>{1.0});

    CHECK_THROWS_AS(downside_tail(std::vector<double>{1.0, 2.0}), DegenerateSample);
    CHECK_THROWS_AS(downside_tail(std::vector<double>{}), std::invalid_argument);

    auto half = testing::normal_sample(1000, 2);
    std::vector<double> sym = half;
    for (double v : half) sym.push_back(-v);
    CHECK(downside_tail(sym).values.size() == upside_tail(sym).values.size());
}

TEST_CASE("Hill estimator by hand", "[tail]") {
    const auto s = from_values({8.0, 4.0, 2.0, 1.0});
    const auto e = hill(s, 3);
    CHECK_THAT(e.gamma, WithinAbs(2.0 * std::log(2.0), 1e-15));
    CHECK_THAT(e.alpha * e.gamma, WithinAbs(1.0, 1e-12));
    CHECK_THAT(e.standard_error, WithinRel(e.gamma / std::sqrt(3.0), 1e-12));
    CHECK(e.m == 3);
    CHECK(e.method == TailMethod::fixed_fraction);

    CHECK_THROWS_AS(hill(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(hill(s, 4), std::invalid_argument);
    CHECK_THROWS_AS(hill(from_values({2.0, 2.0, 2.0, 1.0}), 2), DegenerateSample);
    CHECK_NOTHROW(hill(from_values({2.0, 2.0, 2.0, 1.0}), 3));
}

TEST_CASE("standard error identity on published tail estimates", "[tail]") {
    CHECK_THAT(hill_standard_error(4.03, 37), WithinAbs(0.66, 0.005));
    CHECK_THAT(hill_standard_error(3.59, 185), WithinAbs(0.26, 0.005));
    CHECK_THAT(hill_standard_error(3.29, 145), WithinAbs(0.27, 0.005));
    CHECK_THROWS_AS(hill_standard_error(1.0, 0), std::invalid_argument);
}

TEST_CASE("Hill on a Pareto(2) sample", "[tail]") {
    const auto s = from_values(testing::pareto_sample(10'000, 2.0, 17));
    const auto e = hill(s, 500);
    CHECK_THAT(e.gamma, WithinAbs(0.5, 3.0 * 0.5 / std::sqrt(500.0)));
}

TEST_CASE("fixed-fraction thresholds", "[tail]") {
    TailSample s = from_values(testing::pareto_sample(3700, 3.0, 1));
    CHECK(hill_at_fraction(s, 0.01).m == 37);
    CHECK(hill_at_fraction(s, 0.05).m == 185);
    TailSample small = from_values(testing::pareto_sample(100, 3.0, 1));
    CHECK(hill_at_fraction(small, 0.05).m == 5);
    CHECK_THROWS_AS(hill_at_fraction(s, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(hill_at_fraction(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hill_at_fraction(small, 0.001), std::invalid_argument);
}

TEST_CASE("Hill curve matches pointwise estimates", "[tail]") {
    const auto s = from_values(testing::pareto_sample(2000, 3.0, 5));
    const auto one = hill_curve(s, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].gamma == hill(s, 1).gamma);

    const auto curve = hill_curve(s, 1000);
    REQUIRE(curve.size() == 1000);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        REQUIRE(curve[i].m == i + 1);
        REQUIRE_THAT(curve[i].gamma, WithinAbs(hill(s, curve[i].m).gamma, 1e-14));
        REQUIRE(curve[i].gamma > 0.0);
    }
    CHECK_THROWS_AS(hill_curve(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(hill_curve(s, 2000), std::invalid_argument);
}

TEST_CASE("Hill curve on an exact Pareto quantile grid converges", "[tail]") {
    const double alpha = 3.0;
    const std::size_t n = 20000;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = std::pow(static_cast<double>(i + 1) / (n + 1.0), -1.0 / alpha);
    const auto curve = hill_curve(from_values(grid), 5000);
    const double target = 1.0 / alpha;
    CHECK(std::fabs(curve[9].gamma - target) > std::fabs(curve[999].gamma - target));
    CHECK_THAT(curve[999].gamma, WithinRel(target, 0.01));
    CHECK_THAT(curve[4999].gamma, WithinRel(target, 0.01));
}

TEST_CASE("weighted regression of the Hill curve", "[tail]") {
    HillCurve linear;
    for (std::size_t m = 1; m <= 200; ++m) linear.push_back({m, 0.5 + 0.001 * static_cast<double>(m)});
    const auto line = hill_regression(linear);
    CHECK_THAT(line.intercept, WithinAbs(0.5, 1e-10));
    CHECK_THAT(line.slope, WithinAbs(0.001, 1e-12));

    CHECK_THROWS_AS(hill_regression(HillCurve{{1, 0.3}}), DegenerateSample);
}

TEST_CASE("modified Hill on a flat curve", "[tail]") {
    const auto s = flat_hill_sample(0.4, 200);
    for (const auto& p : hill_curve(s, 50)) REQUIRE_THAT(p.gamma, WithinAbs(0.4, 1e-12));
    const auto e = modified_hill(s, 50);
    CHECK_THAT(e.gamma, WithinAbs(0.4, 1e-12));
    CHECK(e.method == TailMethod::huisman);
    CHECK(e.m >= 1);
    CHECK(e.m <= 50);
    CHECK_THAT(e.standard_error, WithinRel(e.gamma / std::sqrt(static_cast<double>(e.m)), 1e-12));
    CHECK_THAT(hill_regression(hill_curve(s, 50)).slope, WithinAbs(0.0, 1e-12));
    CHECK_THROWS_AS(modified_hill(s, 9), std::invalid_argument);
}

TEST_CASE("modified Hill picks the closest curve point, larger m on ties", "[tail]") {
    const auto s = from_values(testing::pareto_sample(4000, 3.0, 23));
    const std::size_t kappa = default_kappa(s);
    CHECK(kappa == 2000);
    const auto e = modified_hill(s, kappa);
    const auto curve = hill_curve(s, kappa);
    const double gap = std::fabs(hill(s, e.m).gamma - e.gamma);
    for (const auto& p : curve) {
        REQUIRE(std::fabs(p.gamma - e.gamma) >= gap);
        if (p.m > e.m) REQUIRE(std::fabs(p.gamma - e.gamma) > gap);
    }
    CHECK(modified_hill(s).gamma == e.gamma);
}

TEST_CASE("tail estimates are scale invariant", "[tail]") {
    const auto base = testing::t_sample(3000, 4.0, 44);
    const auto s = downside_tail(base);
    for (double c : {1e-3, 0.37, 12.5, 4e4}) {
        std::vector<double> scaled = base;
        for (auto& v : scaled) v *= c;
        const auto t = downside_tail(scaled);
        for (std::size_t m : {1u, 10u, 75u, 300u}) {
            REQUIRE_THAT(hill(t, m).gamma, WithinAbs(hill(s, m).gamma, 1e-12));
        }
        REQUIRE_THAT(modified_hill(t).gamma, WithinAbs(modified_hill(s).gamma, 1e-12));
    }
}

TEST_CASE("tail estimates ignore the order of the residuals", "[tail]") {
    auto z = testing::t_sample(3000, 4.0, 45);
    const auto s = downside_tail(z);
    const auto ref_hill = hill_at_fraction(s, 0.05);
    const auto ref_mod = modified_hill(s);
    std::mt19937_64 rng(1);
    for (int k = 0; k < 5; ++k) {
        std::shuffle(z.begin(), z.end(), rng);
        const auto t = downside_tail(z);
        CHECK(hill_at_fraction(t, 0.05).gamma == ref_hill.gamma);
        CHECK(modified_hill(t).gamma == ref_mod.gamma);
        CHECK(modified_hill(t).m == ref_mod.m);
    }
}

TEST_CASE("tail estimators recover Pareto indices", "[tail]") {
    for (double alpha : {2.5, 3.0, 4.0}) {
        int hill_ok = 0, mod_ok = 0;
        const int reps = 200;
        for (int r = 0; r < reps; ++r) {
            const auto s = from_values(testing::pareto_sample(2000, alpha, 7000 + static_cast<std::uint64_t>(r)));
            const auto h = hill_at_fraction(s, 0.05);
            const auto m = modified_hill(s);
            if (std::fabs(h.gamma - 1.0 / alpha) <= 3.0 * h.standard_error) ++hill_ok;
            if (std::fabs(m.gamma - 1.0 / alpha) <= 3.0 * m.standard_error) ++mod_ok;
        }
        CHECK(hill_ok >= 190);
        CHECK(mod_ok >= 190);
    }
}
