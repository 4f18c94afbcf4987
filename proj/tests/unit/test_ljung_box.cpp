#include <catch_amalgamated.hpp>

#include "condevt/errors.hpp"
#include "condevt/ljung_box.hpp"
#include "helpers.hpp"

using namespace condevt;
using Catch::Matchers::WithinRel;

TEST_CASE("Ljung-Box against a reference computation", "[ljung_box]") {
    const std::vector<double> x{1, 3, 2, 5, 4, 6, 8, 7, 9, 10, 12, 11};
    const auto r = ljung_box(x, 3);
    CHECK(r.lags == 3);
    // reference values from an independent implementation
    CHECK_THAT(r.statistic, WithinRel(12.998996172295602, 1e-12));
    CHECK_THAT(r.p_value, WithinRel(0.004638776775858194, 1e-9));
}

TEST_CASE("zero sample autocorrelations give Q = 0", "[ljung_box]") {
    std::vector<double> x(20, 0.0);
    x.front() = 1.0;
    x.back() = -1.0;
    const auto r = ljung_box(x, 12);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
}

TEST_CASE("Ljung-Box preconditions", "[ljung_box]") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(ljung_box(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(ljung_box(x, 3), std::invalid_argument);
    CHECK_THROWS_AS(ljung_box(std::vector<double>(30, 4.0), 5), DegenerateSample);
}

TEST_CASE("Ljung-Box on white noise", "[ljung_box]") {
    const auto big = testing::normal_sample(100'000, 1);
    const auto one = ljung_box(big, 12);
    CHECK(one.statistic > 3.0);
    CHECK(one.statistic < 30.0);

    double q_sum = 0.0;
    int rejections = 0;
    int low = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        const auto res = ljung_box(testing::normal_sample(2000, 1000 + static_cast<std::uint64_t>(r)), 12);
        REQUIRE(res.statistic >= 0.0);
        REQUIRE(res.p_value >= 0.0);
        REQUIRE(res.p_value <= 1.0);
        q_sum += res.statistic;
        if (res.p_value < 0.05) ++rejections;
        if (res.p_value < 0.5) ++low;
    }
    CHECK(q_sum / reps > 11.0);
    CHECK(q_sum / reps < 13.0);
    CHECK(rejections >= 8);   // 2% of 400
    CHECK(rejections <= 36);  // 9% of 400
    CHECK(low > 160);
    CHECK(low < 240);
}

TEST_CASE("Ljung-Box detects an AR(1) process", "[ljung_box]") {
    auto e = testing::normal_sample(1000, 3);
    for (std::size_t t = 1; t < e.size(); ++t) e[t] += 0.3 * e[t - 1];
    CHECK(ljung_box(e, 12).p_value < 1e-6);
}
