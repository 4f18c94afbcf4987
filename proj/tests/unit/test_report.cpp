#include <catch_amalgamated.hpp>
#include <sstream>

#include "condevt/report.hpp"
#include "condevt/serialize.hpp"

using namespace condevt;
using nlohmann::json;

TEST_CASE("delimited tables use fixed precision", "[report]") {
    Table t;
    t.columns = {"name", "value", "count", "missing"};
    t.add_row({std::string("a"), 1.23456789, 7LL, std::monostate{}});
    std::ostringstream os;
    write_delimited(os, t);
    CHECK(os.str() == "name,value,count,missing\na,1.2346,7,\n");
    std::ostringstream tab;
    write_delimited(tab, t, '\t', 2);
    CHECK(tab.str() == "name\tvalue\tcount\tmissing\na\t1.23\t7\t\n");
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("JSON records keep full precision", "[report]") {
    Table t;
    t.columns = {"x", "y"};
    t.add_row({0.1234567890123, std::monostate{}});
    const json j = to_records(t);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["x"].get<double>() == 0.1234567890123);
    CHECK(j[0]["y"].is_null());
}

TEST_CASE("fit results round-trip through JSON", "[report]") {
    FitResult f;
    f.params = GarchParams{-0.03, 0.006, 0.066, 0.924, 4.0, Innovation::student_t};
    f.loglik = -5000.123456789;
    f.robust_se = GarchVector{0.084, 0.004, 0.01, 0.02};
    f.converged = true;
    f.iterations = 321;
    f.warnings = {"something"};
    const json j = f;
    const auto back = json::parse(j.dump()).get<FitResult>();
    CHECK(back.params.phi == f.params.phi);
    CHECK(back.params.alpha0 == f.params.alpha0);
    CHECK(back.params.alpha1 == f.params.alpha1);
    CHECK(back.params.beta1 == f.params.beta1);
    CHECK(back.params.nu == 4.0);
    CHECK(back.loglik == f.loglik);
    REQUIRE(back.robust_se.has_value());
    CHECK((*back.robust_se)[3] == 0.02);
    CHECK(back.iterations == 321);
    CHECK(back.warnings == f.warnings);

    f.robust_se.reset();
    f.params.innovation = Innovation::normal;
    const auto again = json(f).get<FitResult>();
    CHECK_FALSE(again.robust_se.has_value());
    CHECK(again.params.innovation == Innovation::normal);
}

TEST_CASE("enum names", "[report]") {
    CHECK(parse_convention("std-t") == TConvention::standardized);
    CHECK(parse_convention("raw-t") == TConvention::raw);
    CHECK_THROWS_AS(parse_convention("t"), std::invalid_argument);
    CHECK(to_string(TConvention::raw) == "raw-t");
    CHECK(to_string(TailMethod::huisman) == "huisman");
    CHECK(parse_innovation(to_string(Innovation::normal)) == Innovation::normal);
    CHECK_THROWS_AS(parse_innovation("cauchy"), std::invalid_argument);
}
