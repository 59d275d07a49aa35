#include <doctest.h>

#include "wpw/eigen1d.hpp"
#include "wpw/errors.hpp"
#include "wpw/rayleigh.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace wpw;

namespace {
constexpr double kPi = std::numbers::pi;
const double kPiSq = kPi * kPi;

DiscreteFunction sampled(double L, int n, double (*f)(double)) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = f(L * i / (n - 1.0));
    return DiscreteFunction::uniform(L, n, std::move(v));
}

// independent fine-Riemann-sum root for Int |u-t|^{p-2}(u-t) f = 0
double riemann_shift(double (*uf)(double), const WeightFunction& w, double p) {
    auto resid = [&](double t) {
        const int N = 200000;
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
            const double x = (i + 0.5) / N;
            const double d = uf(x) - t;
            acc += (d == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(d), p - 1.0), d)) *
                   w.evaluate(x);
        }
        return acc / N;
    };
    double lo = -1.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (resid(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace

TEST_CASE("optimal_shift: symmetry and the weighted mean") {
    auto cw = WeightFunction::constant(1.0, 1.0);
    auto u1 = sampled(1.0, 201, [](double x) { return x - 0.5; });
    CHECK(optimal_shift(u1, cw, PExponent(2.0)) == doctest::Approx(0.0).epsilon(1e-12));

    auto u2 = sampled(1.0, 201, [](double x) { return x; });
    CHECK(optimal_shift(u2, cw, PExponent(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("optimal_shift: p = 3 with an exponential weight vs Riemann oracle") {
    auto w = WeightFunction::exponential(1.0, 1.0);
    auto u = sampled(1.0, 2001, [](double x) { return x; });
    const double t_star = optimal_shift(u, w, PExponent(3.0));
    const double t_oracle = riemann_shift([](double x) { return x; }, w, 3.0);
    CHECK(t_star == doctest::Approx(t_oracle).epsilon(1e-5));
    // idempotence: re-shifting the shifted function gives ~0
    std::vector<double> shifted = u.values;
    for (auto& v : shifted)
        v -= t_star;
    auto us = DiscreteFunction::uniform(1.0, 2001, std::move(shifted));
    CHECK(optimal_shift(us, w, PExponent(3.0)) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("optimal_shift rejects constant functions") {
    auto u = DiscreteFunction::uniform(1.0, 21, std::vector<double>(21, 3.0));
    CHECK_THROWS_AS(optimal_shift(u, WeightFunction::constant(1.0, 1.0), PExponent(2.0)),
                    DegenerateError);
}

TEST_CASE("quotient: classical values") {
    auto cw = WeightFunction::constant(1.0, 1.0);
    auto cosu = sampled(1.0, 2001, [](double x) { return std::cos(kPi * x); });
    CHECK(quotient(cosu, cw, PExponent(2.0)) == doctest::Approx(kPiSq).epsilon(1e-5));

    auto lin = sampled(1.0, 101, [](double x) { return x - 0.5; });
    CHECK(quotient(lin, cw, PExponent(2.0)) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("quotient upper-bounds the shooting eigenvalue") {
    auto w = WeightFunction::log_quadratic(3.0, 0.4, 1.0);
    auto lam = first_nontrivial_eigenvalue(EigenProblem(w, PExponent(2.0)), 1e-9).lambda;
    auto u = sampled(1.0, 501, [](double x) { return std::cos(kPi * x); });
    CHECK(quotient(u, w, PExponent(2.0)) >= lam * (1.0 - 1e-9));
}

TEST_CASE("analytic gradient matches central finite differences") {
    for (double p : {1.5, 3.0}) {
        CAPTURE(p);
        auto w = random_smooth_log_concave(11, 1.0);
        const int n = 41;
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double x = i / (n - 1.0);
            vals[static_cast<std::size_t>(i)] =
                std::cos(kPi * x) + 0.3 * std::sin(3 * kPi * x);
        }
        auto u = DiscreteFunction::uniform(1.0, n, vals);
        auto qg = quotient_with_gradient(u, w, PExponent(p));

        double gmax = 0.0;
        for (double g : qg.grad)
            gmax = std::max(gmax, std::abs(g));
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double h = 1e-6;
            auto up = u, um = u;
            up.values[static_cast<std::size_t>(i)] += h;
            um.values[static_cast<std::size_t>(i)] -= h;
            const double fd =
                (quotient(up, w, PExponent(p)) - quotient(um, w, PExponent(p))) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - qg.grad[static_cast<std::size_t>(i)]));
        }
        CHECK(worst / gmax <= 1e-6);
    }
}

TEST_CASE("minimize_quotient p = 2: classical and exponential") {
    auto r = minimize_quotient(WeightFunction::constant(1.0, 1.0), PExponent(2.0), 2001,
                               1e-8, 0);
    CHECK(r.converged);
    CHECK(r.lambda_h == doctest::Approx(kPiSq).epsilon(1e-4));
    CHECK(r.lambda_h >= kPiSq * (1.0 - 1e-9)); // conforming upper bound

    auto re = minimize_quotient(WeightFunction::exponential(2.0, 1.0), PExponent(2.0), 2001,
                                1e-8, 0);
    CHECK(re.lambda_h == doctest::Approx(kPiSq + 1.0).epsilon(1e-4));
}

TEST_CASE("minimize_quotient: refinement converges toward the shooting value") {
    auto w = WeightFunction::exponential(3.0, 1.0);
    const double lam =
        first_nontrivial_eigenvalue(EigenProblem(w, PExponent(2.0)), 1e-10).lambda;
    double prev_err = 1e300;
    for (int n : {251, 501, 1001, 2001}) {
        CAPTURE(n);
        const double lh = minimize_quotient(w, PExponent(2.0), n, 1e-8, 0).lambda_h;
        const double err = std::abs(lh - lam);
        CHECK(err < prev_err);
        CHECK(lh >= lam * (1.0 - 1e-9));
        prev_err = err;
    }
}

TEST_CASE("p != 2 descent agrees with shooting and respects the bound") {
    auto w = WeightFunction::log_quadratic(4.0, 0.7, 1.0);
    const double pi3 = pi_p_closed(PExponent(3.0));
    const double lam =
        first_nontrivial_eigenvalue(EigenProblem(w, PExponent(3.0)), 1e-9).lambda;
    auto r = minimize_quotient(w, PExponent(3.0), 2001, 1e-8, 42);
    CHECK(r.lambda_h >= pi3 * pi3 * pi3 * (1.0 - 1e-3));
    CHECK(std::abs(r.lambda_h - lam) / lam <= 1e-3);
}

TEST_CASE("descent path at p -> 2 agrees with the eigensolver path") {
    auto w = WeightFunction::exponential(1.0, 1.0);
    auto direct = minimize_quotient(w, PExponent(2.0), 501, 1e-8, 7);
    auto nearby = minimize_quotient(w, PExponent(2.0 + 1e-12), 501, 1e-8, 7);
    CHECK(std::abs(direct.lambda_h - nearby.lambda_h) / direct.lambda_h <= 1e-6);
}

TEST_CASE("minimize_quotient input guards") {
    auto w = WeightFunction::constant(1.0, 1.0);
    CHECK_THROWS_AS(minimize_quotient(w, PExponent(2.0), 16, 1e-8, 0), DomainError);
    CHECK_THROWS_AS(minimize_quotient(w, PExponent(2.0), 33, 0.0, 0), DomainError);
}

TEST_CASE("DiscreteFunction validation") {
    CHECK_THROWS_AS(DiscreteFunction({0.0, 1.0}, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(DiscreteFunction({0.0, 0.5, 0.5}, {0.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(DiscreteFunction({0.0, 0.5, 1.0}, {0.0, 1.0}), DomainError);
}
