// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and pins its tolerances in code.

#include "wpw/bounds.hpp"
#include "wpw/json_io.hpp"
#include "wpw/rayleigh.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace wpw;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPiSq = kPi * kPi;

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

bool check(bool ok, std::string& detail, const std::string& msg) {
    if (!ok && detail.empty())
        detail = msg;
    return ok;
}

// ---- 1: pi_p correctness ----------------------------------------------------
bool c1_pi_p(std::string& detail) {
    bool ok = true;
    ok &= check(std::abs(pi_p_closed(PExponent(2.0)) - kPi) <= 1e-12, detail,
                "pi_2 != pi at 1e-12");
    for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0}) {
        const double c = pi_p_closed(PExponent(p));
        const double q = pi_p_quadrature(PExponent(p), 1e-10);
        ok &= check(std::abs(c - q) <= 1e-9, detail,
                    "closed vs quadrature at p=" + std::to_string(p));
        const double conj = pi_p_closed(PExponent(p / (p - 1.0)));
        ok &= check(std::abs(c - conj) <= 1e-12, detail,
                    "conjugate symmetry at p=" + std::to_string(p));
    }
    return ok;
}

// ---- 2: unweighted sharpness ------------------------------------------------
bool c2_sharpness(std::string& detail) {
    bool ok = true;
    for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0})
        for (double L : {0.5, 1.0, 2.0}) {
            const double bound = std::pow(pi_p_closed(PExponent(p)) / L, p);
            const auto r = first_nontrivial_eigenvalue(
                EigenProblem(WeightFunction::constant(1.0, L), PExponent(p)), 1e-9);
            ok &= check(std::abs(r.lambda - bound) <= 1e-6 * bound, detail,
                        "constant weight p=" + std::to_string(p) + " L=" + std::to_string(L) +
                            " rel err " + std::to_string(std::abs(r.lambda - bound) / bound));
        }
    return ok;
}

// ---- 3: exponential weights -------------------------------------------------
bool c3_exponential(std::string& detail) {
    bool ok = true;
    for (double p : {1.5, 2.0, 3.0})
        for (double kappa : {-5.0, -2.0, -0.5, 0.0, 0.5, 2.0, 5.0}) {
            const auto r = first_nontrivial_eigenvalue(
                EigenProblem(WeightFunction::exponential(kappa, 1.0), PExponent(p)), 1e-9);
            const double mu = exponential_eigenvalue(PExponent(p), kappa, 1.0, 1e-10);
            ok &= check(std::abs(r.lambda - mu) <= 1e-6 * mu, detail,
                        "shoot vs Riccati p=" + std::to_string(p) +
                            " kappa=" + std::to_string(kappa));
            if (p == 2.0) {
                const double exact = 0.25 * kappa * kappa + kPiSq;
                ok &= check(std::abs(r.lambda - exact) <= 1e-6 * exact, detail,
                            "p=2 closed form at kappa=" + std::to_string(kappa));
                ok &= check(std::abs(mu - exact) <= 1e-6 * exact, detail,
                            "Riccati vs closed form at kappa=" + std::to_string(kappa));
            }
        }
    for (double p : {1.5, 2.0, 3.0})
        for (double kappa : {0.5, 2.0, 5.0}) {
            const auto plus = first_nontrivial_eigenvalue(
                EigenProblem(WeightFunction::exponential(kappa, 1.0), PExponent(p)), 1e-10);
            const auto minus = first_nontrivial_eigenvalue(
                EigenProblem(WeightFunction::exponential(-kappa, 1.0), PExponent(p)), 1e-10);
            ok &= check(std::abs(plus.lambda - minus.lambda) <= 1e-8 * plus.lambda, detail,
                        "reflection symmetry p=" + std::to_string(p) +
                            " kappa=" + std::to_string(kappa));
        }
    return ok;
}

// ---- 4: Proposition property suite -------------------------------------------
bool c4_proposition(std::string& detail) {
    const auto certs = verify_proposition(0, 200, {1.5, 2.0, 3.0}, 1.0, 1e-6);
    int fails = 0;
    for (const auto& c : certs)
        if (!c.pass) {
            ++fails;
            if (detail.empty())
                detail = c.provenance;
        }
    if (fails > 0)
        detail += " (" + std::to_string(fails) + " of " + std::to_string(certs.size()) +
                  " failing)";
    return fails == 0;
}

// ---- 5: exponential reduction chain ------------------------------------------
bool c5_reduction(std::string& detail) {
    bool ok = true;
    const double ps[3] = {1.5, 2.0, 3.0};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double p = ps[seed % 3];
        const auto w = random_smooth_log_concave(seed, 1.0);
        const auto rep = kappa_reduction_check(EigenProblem(w, PExponent(p)), 1e-6);
        ok &= check(rep.lambda_f >= rep.lambda_exp * (1.0 - 1e-6), detail,
                    "lambda(f) < lambda(exp) at seed " + std::to_string(seed));
        ok &= check(rep.lambda_exp >= rep.wirtinger_bound * (1.0 - 1e-6), detail,
                    "lambda(exp) < bound at seed " + std::to_string(seed));
    }
    return ok;
}

// ---- 6: domain monotonicity ---------------------------------------------------
bool c6_monotonicity(std::string& detail) {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = random_log_concave(seed, 1.0);
        double prev = 0.0;
        bool first = true;
        for (double L : {1.0, 0.75, 0.5}) { // lambda grows as the interval shrinks
            const auto r = first_nontrivial_eigenvalue(
                EigenProblem(w.restricted(L), PExponent(2.0)), 1e-9);
            if (!first)
                ok &= check(r.lambda > prev * (1.0 + 1e-8), detail,
                            "no strict decrease at seed " + std::to_string(seed) +
                                " L=" + std::to_string(L));
            prev = r.lambda;
            first = false;
        }
    }
    return ok;
}

// ---- 7: slicing invariants -----------------------------------------------------
bool c7_slicing(std::string& detail) {
    bool ok = true;
    struct Case {
        ConvexPolygon poly;
        Weight2D w;
        const char* name;
    };
    std::vector<Case> cases;
    cases.push_back({ConvexPolygon::rectangle(0, 0, 1, 1), Weight2D::constant(1.0), "square"});
    cases.push_back({random_convex_polygon(1), Weight2D::constant(1.0), "poly1"});
    cases.push_back({random_convex_polygon(2), Weight2D::log_linear({0.5, -0.3}), "poly2"});
    cases.push_back(
        {random_convex_polygon(3), Weight2D::gaussian(1.5, 0.0, 1.5, {0.2, -0.1}), "poly3"});

    for (const auto& cs : cases) {
        ScalarField base = linear_field({1.0, 0.0}, 0.0);
        const double shift = zero_moment_shift(cs.poly, base, cs.w, PExponent(2.0));
        ScalarField u = linear_field({1.0, 0.0}, shift);
        double prev_rate = 1e300;
        for (double eps : {0.4, 0.2, 0.1}) {
            const auto rep = verify_slicing_bound(cs.poly, u, cs.w, PExponent(2.0), eps, 1e-6);
            const std::string tag =
                std::string(cs.name) + " eps=" + std::to_string(eps);
            ok &= check(rep.all_pass, detail, tag + ": slice certificate failed");
            ok &= check(rep.max_moment <= rep.moment_tol, detail, tag + ": moment over tol");
            // width and chord concavity per slice (area conservation is
            // enforced inside decompose)
            const auto dec = decompose(cs.poly, u, cs.w, PExponent(2.0), eps, 1e-6);
            for (const auto& s : dec.slices) {
                ok &= check(s.width <= eps * (1.0 + 1e-9), detail, tag + ": width > eps");
                ok &= check(s.width <=
                                std::sqrt(2.0 * s.polygon.area()) * (1.0 + 1e-9),
                            detail, tag + ": width > sqrt(2A)");
                double g2 = 0, g1 = 0;
                for (int j = 0; j < 257; ++j) {
                    const double g = cross_section(s, s.length * j / 256.0);
                    if (j >= 2)
                        ok &= check(g1 >= 0.5 * (g2 + g) - 1e-9, detail,
                                    tag + ": cross-section concavity");
                    g2 = g1;
                    g1 = g;
                }
            }
            ok &= check(rep.max_residual_rate <= prev_rate + 1e-12, detail,
                        tag + ": residual rate increased");
            prev_rate = rep.max_residual_rate;
        }
    }
    return ok;
}

// ---- 8: desk-scale 2D theorem ---------------------------------------------------
bool c8_theorem_2d(std::string& detail) {
    bool ok = true;
    const auto square = ConvexPolygon::rectangle(0, 0, 1, 1);
    const auto one = Weight2D::constant(1.0);

    double prev_err = 1e300;
    double lam_finest = 0.0;
    for (double h : {0.1, 0.05, 0.025}) {
        lam_finest = fem_lambda_2d(square, one, PExponent(2.0), h);
        const double err = std::abs(lam_finest - kPiSq);
        ok &= check(err < prev_err, detail, "square FEM error not monotone at h=" +
                                                std::to_string(h));
        prev_err = err;
    }
    const double margin = lam_finest - 0.5 * kPiSq; // bound (pi/sqrt(2))^2
    ok &= check(margin >= 0.5 * kPiSq - kPiSq * 1e-3, detail, "square margin too small");

    const double j11p = 1.8411837813406593; // first positive zero of J1'
    const auto disk = ConvexPolygon::regular(64, 1.0);
    const double lam_disk = fem_lambda_2d(disk, one, PExponent(2.0), 0.05);
    ok &= check(std::abs(lam_disk - j11p * j11p) <= 0.02 * j11p * j11p, detail,
                "disk eigenvalue off the Bessel oracle by " +
                    std::to_string(std::abs(lam_disk - j11p * j11p) / (j11p * j11p)));
    const auto cdisk = verify_theorem_2d(disk, one, PExponent(2.0), 0.05, 0.0, "disk64");
    ok &= check(cdisk.pass && cdisk.margin > 0.0, detail, "disk certificate failed");

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto poly = random_convex_polygon(seed);
        const auto w = random_weight_2d(seed + 100);
        const auto c = verify_theorem_2d(poly, w, PExponent(2.0), 0.08, 1e-9,
                                         "seed pair " + std::to_string(seed));
        ok &= check(c.pass, detail, "seeded 2D certificate failed: " + c.provenance);
    }
    return ok;
}

// ---- 9: oracle gradient check ---------------------------------------------------
bool c9_gradient(std::string& detail) {
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const double p = (trial % 2 == 0) ? 1.5 : 3.0;
        const auto w = random_smooth_log_concave(static_cast<std::uint64_t>(trial), 1.0);
        const int n = 41;
        // deterministic pseudo-random nodal values
        std::vector<double> vals(static_cast<std::size_t>(n));
        std::uint64_t state = 0x9e3779b97f4a7c15ULL * (trial + 1);
        for (int i = 0; i < n; ++i) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            vals[static_cast<std::size_t>(i)] =
                std::cos(kPi * i / (n - 1.0)) +
                0.4 * (static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5);
        }
        const auto u = DiscreteFunction::uniform(1.0, n, vals);
        const auto qg = quotient_with_gradient(u, w, PExponent(p));
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
        ok &= check(worst <= 1e-6 * gmax, detail,
                    "gradient mismatch " + std::to_string(worst / gmax) + " at trial " +
                        std::to_string(trial));
    }
    return ok;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"pi_p closed form, quadrature and conjugate symmetry", c1_pi_p},
        {"unweighted sharpness lambda = (pi_p/L)^p on the p x L grid", c2_sharpness},
        {"exponential weights: shooting, Riccati oracle, reflection", c3_exponential},
        {"200-seed log-concave suite with discrete-oracle cross-checks", c4_proposition},
        {"exponential reduction chain on 50 smooth weights", c5_reduction},
        {"domain monotonicity over nested intervals, 20 weights", c6_monotonicity},
        {"slicing invariants on square and three seeded polygons", c7_slicing},
        {"2D certificates: square convergence, 64-gon disk, 10 seeded pairs", c8_theorem_2d},
        {"analytic quotient gradient vs central differences", c9_gradient},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %zu: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), dt, detail.empty() ? "" : " -- ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }
    if (failures > 0)
        std::printf("%d of %zu criteria failing\n", failures, criteria.size());
    else
        std::printf("all %zu criteria pass\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
