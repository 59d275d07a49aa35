#include <doctest.h>

#include "wpw/errors.hpp"
#include "wpw/weights.hpp"

#include <cmath>

using namespace wpw;

TEST_CASE("evaluate: basic families") {
    CHECK(WeightFunction::constant(1.0, 1.0).evaluate(0.3) == 1.0);
    CHECK(WeightFunction::exponential(2.0, 1.0).evaluate(0.5) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    auto prod = WeightFunction::product({WeightFunction::exponential(1.0, 2.0),
                                         WeightFunction::log_quadratic(1.0, 0.0, 2.0)});
    CHECK(prod.evaluate(1.0) == doctest::Approx(1.0).epsilon(1e-14)); // e^{1-1}
}

TEST_CASE("evaluate: domain checks and nonnegativity") {
    auto w = WeightFunction::power(1.5, 0.0, 1.0);
    CHECK_THROWS_AS(w.evaluate(-0.01), DomainError);
    CHECK_THROWS_AS(w.evaluate(1.01), DomainError);
    CHECK(w.evaluate(0.0) == 0.0);
    for (int i = 0; i <= 20; ++i)
        CHECK(w.evaluate(i / 20.0) >= 0.0);
}

TEST_CASE("log_derivative: analytic slopes") {
    auto e = WeightFunction::exponential(-3.0, 1.0);
    CHECK(e.log_derivative(0.1) == -3.0);
    CHECK(e.log_derivative(0.9) == -3.0);

    auto q = WeightFunction::log_quadratic(1.0, 0.5, 1.0);
    CHECK(q.log_derivative(0.5) == 0.0);

    auto pw = WeightFunction::power(2.0, 0.0, 1.0);
    CHECK(pw.log_derivative(0.5) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(pw.log_derivative(0.0), SingularWeightError);
}

TEST_CASE("log_derivative monotone nonincreasing where positive") {
    auto w = WeightFunction::product({WeightFunction::log_quadratic(3.0, 0.7, 1.0),
                                      WeightFunction::exponential(2.0, 1.0)});
    double prev = w.log_derivative(1.0 / 64);
    for (int i = 2; i < 64; ++i) {
        const double cur = w.log_derivative(i / 64.0);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("piecewise log-linear: slopes and breakpoint convention") {
    // slopes 2 then -1: concave
    auto w = WeightFunction::piecewise_log_linear({0.0, 0.5, 1.0}, {0.0, 1.0, 0.5});
    CHECK(w.evaluate(0.25) == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(w.log_derivative(0.25) == doctest::Approx(2.0));
    CHECK(w.log_derivative(0.5) == doctest::Approx(-1.0)); // right-hand slope
    CHECK(w.log_derivative(1.0) == doctest::Approx(-1.0)); // final point: left-hand
    CHECK(validate_log_concavity(w, 101, 1e-12));
}

TEST_CASE("validate_log_concavity verdicts") {
    CHECK(validate_log_concavity(WeightFunction::exponential(5.0, 1.0), 101, 1e-12));
    CHECK(validate_log_concavity(WeightFunction::log_quadratic(3.0, 1.0, 1.0), 101, 1e-12));
    // increasing slopes (1, 2) are constructible but fail certification
    auto bad = WeightFunction::piecewise_log_linear({0.0, 0.5, 1.0}, {0.0, 0.5, 1.5});
    CHECK_FALSE(validate_log_concavity(bad, 101, 1e-12));
    CHECK_THROWS_AS(validate_log_concavity(bad, 2, 1e-12), DomainError);
}

TEST_CASE("random_log_concave: deterministic and always valid") {
    auto a = random_log_concave(0, 1.0);
    auto b = random_log_concave(0, 1.0);
    REQUIRE(a.family() == b.family());
    for (int i = 0; i <= 32; ++i)
        CHECK(a.evaluate(i / 32.0) == b.evaluate(i / 32.0));

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CAPTURE(seed);
        auto w = random_log_concave(seed, 1.0);
        CHECK(validate_log_concavity(w, 1001, 1e-12));
        for (int i = 0; i <= 50; ++i) {
            const double v = w.evaluate(i / 50.0);
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("random_smooth_log_concave is positive everywhere") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        CAPTURE(seed);
        auto w = random_smooth_log_concave(seed, 1.0);
        CHECK(validate_log_concavity(w, 1001, 1e-12));
        CHECK(positive_in_interior(w));
        CHECK(w.evaluate(0.0) > 0.0);
        CHECK(w.evaluate(1.0) > 0.0);
        // smooth families only
        auto fam = w.family();
        CHECK(fam != WeightFunction::Family::Power);
        CHECK(fam != WeightFunction::Family::PiecewiseLogLinear);
    }
}

TEST_CASE("restriction keeps the profile") {
    auto w = random_log_concave(7, 1.0);
    auto r = w.restricted(0.6);
    CHECK(r.length() == doctest::Approx(0.6));
    for (int i = 0; i <= 24; ++i) {
        const double x = 0.6 * i / 24.0;
        CHECK(r.evaluate(x) == doctest::Approx(w.evaluate(x)).epsilon(1e-12));
    }
}

TEST_CASE("scaling multiplies values") {
    auto w = WeightFunction::log_quadratic(2.0, 0.4, 1.0);
    auto s = w.scaled(3.5);
    for (int i = 0; i <= 10; ++i) {
        const double x = i / 10.0;
        CHECK(s.evaluate(x) == doctest::Approx(3.5 * w.evaluate(x)).epsilon(1e-14));
    }
}

TEST_CASE("constructor guards") {
    CHECK_THROWS_AS(WeightFunction::constant(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(WeightFunction::constant(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(WeightFunction::log_quadratic(-1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(WeightFunction::power(-0.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(WeightFunction::piecewise_log_linear({0.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(WeightFunction::piecewise_log_linear({0.1, 1.0}, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(WeightFunction::piecewise_log_linear({0.0, 0.0}, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(WeightFunction::product({}), DomainError);
    CHECK_THROWS_AS(
        WeightFunction::product({WeightFunction::constant(1.0, 1.0),
                                 WeightFunction::constant(1.0, 2.0)}),
        DomainError);
}
