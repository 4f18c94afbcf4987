#include <catch_amalgamated.hpp>
#include <cmath>

#include "condevt/mcstudy.hpp"
#include "condevt/serialize.hpp"

using namespace condevt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

StudyConfig small_config() {
    StudyConfig cfg;
    cfg.n = 600;
    cfg.replications = 6;
    cfg.seed = 42;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("expected violation arithmetic", "[mcstudy]") {
    CHECK(expected_violations(2000, 1, 0.95) == Catch::Approx(100.0).epsilon(1e-14));
    CHECK(expected_violations(2000, 2, 0.95) == Catch::Approx(50.0).epsilon(1e-14));
    CHECK(expected_violations(2000, 5, 0.99) == Catch::Approx(4.0).epsilon(1e-14));
    CHECK(expected_violations(2000, 3, 0.99) == Catch::Approx(6.66).epsilon(1e-14));
    CHECK_THROWS_AS(expected_violations(2000, 0, 0.95), std::invalid_argument);
}

TEST_CASE("block violations", "[mcstudy]") {
    const std::vector<double> zeros(10, 0.0);
    CHECK(backtest_violations(zeros, 1.0, 1) == 0);
    const std::vector<double> r{-10.0, 0.0, -10.0, 0.0};
    CHECK(backtest_violations(r, 5.0, 2) == 2);
    CHECK(backtest_violations(r, 5.0, 1) == 2);
    CHECK(backtest_violations(r, 5.0, 4) == 1);
    CHECK(backtest_violations(r, 25.0, 4) == 0);
    const std::vector<double> odd{-3.0, -3.0, -3.0};
    CHECK(backtest_violations(odd, 5.0, 2) == 1);  // trailing partial block ignored
    CHECK_THROWS_AS(backtest_violations(r, 5.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(backtest_violations(r, 5.0, 5), std::invalid_argument);

    const std::vector<double> losses{15.0, 5.0};
    CHECK(backtest_violations(r, losses, 2) == 1);
    CHECK_THROWS_AS(backtest_violations(r, std::vector<double>{1.0}, 2), std::invalid_argument);
}

TEST_CASE("study configuration checks", "[mcstudy]") {
    StudyConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.replications = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = StudyConfig{};
    cfg.n = 99;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = StudyConfig{};
    cfg.horizons = {1, 0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = StudyConfig{};
    cfg.quantile_levels = {1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = StudyConfig{};
    cfg.oracle_n = 1000;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("study report layout and determinism", "[mcstudy]") {
    const auto cfg = small_config();
    const auto a = run_study(cfg);
    const auto b = run_study(cfg);
    CHECK(a.used == cfg.replications);
    CHECK(a.excluded == 0);
    REQUIRE(a.quantiles.size() == 8);
    REQUIRE(a.probabilities.size() == 8);
    REQUIRE(a.violations.size() == 8);
    const nlohmann::json ja = a, jb = b;
    CHECK(ja.dump() == jb.dump());

    for (const auto& v : a.violations) CHECK(v.expected == expected_violations(cfg.n, v.h, v.level));
    for (const auto& p : a.probabilities) {
        CHECK(p.mean_estimate >= 0.0);
        CHECK(p.mean_estimate <= 1.0);
        CHECK_FALSE(p.oracle.has_value());
    }
    // estimates grow with the horizon
    for (std::size_t i = 0; i + 2 < a.quantiles.size(); i += 2) {
        CHECK(a.quantiles[i + 2].mean_estimate > a.quantiles[i].mean_estimate);
        CHECK(a.quantiles[i + 3].mean_estimate > a.quantiles[i + 1].mean_estimate);
    }
    CHECK(a.mean_alpha > 2.0);
}

TEST_CASE("study aggregation does not depend on scheduling", "[mcstudy]") {
    auto cfg = small_config();
    const nlohmann::json serial = run_study(cfg);
    cfg.threads = 4;
    const nlohmann::json parallel = run_study(cfg);
    CHECK(serial.dump() == parallel.dump());
}

TEST_CASE("study results depend on the seed", "[mcstudy]") {
    auto cfg = small_config();
    cfg.replications = 2;
    const auto a = run_study(cfg);
    cfg.seed = 43;
    const auto b = run_study(cfg);
    CHECK(a.quantiles[0].mean_estimate != b.quantiles[0].mean_estimate);
}

TEST_CASE("study with true parameters and fixed-fraction tails", "[mcstudy]") {
    auto cfg = small_config();
    cfg.refit = false;
    cfg.tail_method = TailMethod::fixed_fraction;
    cfg.tail_fraction = 0.05;
    const auto r = run_study(cfg);
    CHECK(r.used == cfg.replications);
    CHECK(r.mean_m == Catch::Approx(30.0));
}

TEST_CASE("study fails when too many replications fail", "[mcstudy]") {
    auto cfg = small_config();
    cfg.tail_method = TailMethod::fixed_fraction;
    cfg.tail_fraction = 0.7;
    CHECK_THROWS_AS(run_study(cfg), std::runtime_error);
}

TEST_CASE("oracle targets", "[mcstudy]") {
    const GarchParams p{0.0, 0.1, 0.15, 0.8, 4.0, Innovation::student_t};
    const std::vector<std::size_t> hs{1, 2};
    const std::vector<double> levels{0.5, 0.95};
    const std::vector<double> thresholds{3.0};
    const auto a = oracle_targets(p, TConvention::standardized, hs, levels, thresholds, 1'000'000, 7);
    REQUIRE(a.quantiles.size() == 2);
    REQUIRE(a.quantiles[0].size() == 2);
    REQUIRE(a.probabilities[0].size() == 1);
    CHECK_THAT(a.quantiles[0][0], WithinAbs(0.0, 0.01));
    CHECK_THAT(a.quantiles[1][0], WithinAbs(0.0, 0.02));
    CHECK(a.quantiles[1][1] > a.quantiles[0][1]);

    const auto b = oracle_targets(p, TConvention::standardized, hs, levels, thresholds, 2'000'000, 8);
    CHECK_THAT(b.quantiles[0][1], WithinRel(a.quantiles[0][1], 0.02));
    CHECK_THAT(b.quantiles[1][1], WithinRel(a.quantiles[1][1], 0.02));

    CHECK_THROWS_AS(oracle_targets(p, TConvention::standardized, hs, levels, thresholds, 1000, 7),
                    std::invalid_argument);
}

TEST_CASE("oracle quantiles give binomial violation counts", "[mcstudy]") {
    const GarchParams p{0.0, 0.1, 0.15, 0.8, 4.0, Innovation::student_t};
    const std::vector<std::size_t> hs{1, 2, 4, 5};
    const std::vector<double> levels{0.95, 0.99};
    const auto targets = oracle_targets(p, TConvention::standardized, hs, levels, {}, 4'000'000, 3);
    const std::size_t n = 2000;
    const int reps = 200;
    std::vector<double> totals(hs.size() * levels.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
        const auto s = simulate(p, n, 1000, 60'000 + static_cast<std::uint64_t>(r));
        for (std::size_t a = 0; a < hs.size(); ++a) {
            for (std::size_t b = 0; b < levels.size(); ++b) {
                totals[a * levels.size() + b] +=
                    static_cast<double>(backtest_violations(s.values(), targets.quantiles[a][b], hs[a]));
            }
        }
    }
    for (std::size_t a = 0; a < hs.size(); ++a) {
        for (std::size_t b = 0; b < levels.size(); ++b) {
            const double blocks = static_cast<double>(n / hs[a]);
            const double q = 1.0 - levels[b];
            const double expected = expected_violations(n, hs[a], levels[b]);
            const double half_width = 2.576 * std::sqrt(blocks * q * (1.0 - q) / reps);
            INFO("h = " << hs[a] << ", level = " << levels[b]);
            CHECK_THAT(totals[a * levels.size() + b] / reps, WithinAbs(expected, half_width));
        }
    }
}
