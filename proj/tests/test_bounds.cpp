#include <doctest.h>

#include "wpw/bounds.hpp"
#include "wpw/errors.hpp"

#include <cmath>
#include <numbers>

using namespace wpw;

namespace {
const double kPiSq = std::numbers::pi * std::numbers::pi;
}

TEST_CASE("certificate bookkeeping is exact") {
    auto c = make_certificate("proposition_1d", 2.0, 1.0, kPiSq + 0.25, 1e-6, "unit");
    CHECK(c.bound == doctest::Approx(kPiSq).epsilon(1e-14));
    CHECK(c.margin == c.computed_lambda - c.bound);
    CHECK(c.pass);

    auto f = make_certificate("proposition_1d", 2.0, 1.0, kPiSq * 0.9, 1e-6, "unit");
    CHECK_FALSE(f.pass);
}

TEST_CASE("verify_proposition: constant weight has zero margin") {
    // seed sweep over a singleton grid reuses the random generator, so build
    // the constant case directly
    auto prob = EigenProblem(WeightFunction::constant(1.0, 1.0), PExponent(2.0));
    auto r = first_nontrivial_eigenvalue(prob, 1e-10);
    auto c = make_certificate("proposition_1d", 2.0, 1.0, r.lambda, 1e-6, "constant");
    CHECK(std::abs(c.margin) <= 1e-6 * c.bound);
}

TEST_CASE("verify_proposition sweep: all certificates pass") {
    auto certs = verify_proposition(0, 12, {1.5, 2.0, 3.0}, 1.0, 1e-6);
    CHECK(certs.size() == 36);
    for (const auto& c : certs) {
        CAPTURE(c.provenance);
        CHECK(c.pass);
        CHECK(c.margin == c.computed_lambda - c.bound);
        if (c.p == 2.0)
            CHECK(c.oracle_lambda > 0.0); // the discrete oracle ran
    }
}

TEST_CASE("mesh generation: deterministic, positive areas, covers the polygon") {
    auto sq = ConvexPolygon::rectangle(0, 0, 1, 1);
    auto mesh = triangulate(sq, 0.1);
    auto mesh2 = triangulate(sq, 0.1);
    REQUIRE(mesh.points.size() == mesh2.points.size());
    CHECK(mesh.points.size() > 100);
    double covered = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec2 a = mesh.points[static_cast<std::size_t>(t[0])];
        const Vec2 b = mesh.points[static_cast<std::size_t>(t[1])];
        const Vec2 c = mesh.points[static_cast<std::size_t>(t[2])];
        const double area2 = (b - a).cross(c - a);
        CHECK(area2 > 0.0);
        covered += 0.5 * area2;
    }
    CHECK(covered == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("FEM on the unit square reproduces pi^2") {
    auto sq = ConvexPolygon::rectangle(0, 0, 1, 1);
    const double lam = fem_lambda_2d(sq, Weight2D::constant(1.0), PExponent(2.0), 0.05);
    CHECK(lam == doctest::Approx(kPiSq).epsilon(2e-3));
    CHECK(lam >= kPiSq * (1.0 - 1e-9)); // conforming upper bound
}

TEST_CASE("FEM error decreases monotonically under refinement") {
    auto sq = ConvexPolygon::rectangle(0, 0, 1, 1);
    double prev = 1e300;
    for (double h : {0.1, 0.05, 0.025}) {
        CAPTURE(h);
        const double lam = fem_lambda_2d(sq, Weight2D::constant(1.0), PExponent(2.0), h);
        const double err = std::abs(lam - kPiSq);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("theorem certificate on the square") {
    auto sq = ConvexPolygon::rectangle(0, 0, 1, 1);
    auto c = verify_theorem_2d(sq, Weight2D::constant(1.0), PExponent(2.0), 0.05, 0.0);
    CHECK(c.pass);
    CHECK(c.scale == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.bound == doctest::Approx(kPiSq / 2.0).epsilon(1e-12));
    CHECK(c.margin >= kPiSq / 2.0 - kPiSq * 1e-3);
}

TEST_CASE("disk eigenvalue via a 64-gon matches the Bessel oracle") {
    // first nonzero root of J1': lambda(disk) = (j'_{1,1})^2
    const double j11p = 1.8411837813406593;
    auto disk = ConvexPolygon::regular(64, 1.0);
    const double lam = fem_lambda_2d(disk, Weight2D::constant(1.0), PExponent(2.0), 0.06);
    CHECK(std::abs(lam - j11p * j11p) / (j11p * j11p) <= 0.02);
    auto c = verify_theorem_2d(disk, Weight2D::constant(1.0), PExponent(2.0), 0.06, 0.0);
    CHECK(c.pass);
    CHECK(c.margin > 0.0);
}

TEST_CASE("seeded polygon/weight certificates pass") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        CAPTURE(seed);
        auto poly = random_convex_polygon(seed);
        auto w = random_weight_2d(seed + 100);
        auto c = verify_theorem_2d(poly, w, PExponent(2.0), 0.08, 1e-9);
        CAPTURE(c.provenance);
        CHECK(c.pass);
    }
}

TEST_CASE("p = 3 FEM quotient stays above the sharp 2D bound") {
    auto sq = ConvexPolygon::rectangle(0, 0, 1, 1);
    const double p = 3.0;
    const double lam = fem_lambda_2d(sq, Weight2D::constant(1.0), PExponent(p), 0.15, 3);
    const double bound = std::pow(pi_p_closed(PExponent(p)) / std::sqrt(2.0), p);
    CHECK(lam >= bound);
    // and the p -> 2 limit of the descent agrees with the eigensolver path
    const double lam2d = fem_lambda_2d(sq, Weight2D::constant(1.0), PExponent(2.0), 0.15);
    const double lam2n = fem_lambda_2d(sq, Weight2D::constant(1.0), PExponent(2.0 + 1e-12),
                                       0.15, 3);
    CHECK(std::abs(lam2d - lam2n) / lam2d <= 1e-5);
}

TEST_CASE("zero_moment_shift kills the global moment") {
    auto poly = random_convex_polygon(3);
    auto w = random_weight_2d(9);
    ScalarField base = linear_field({1.0, 0.25}, 0.0);
    for (double p : {1.5, 2.0, 3.0}) {
        CAPTURE(p);
        const double c0 = zero_moment_shift(poly, base, w, PExponent(p));
        ScalarField u = linear_field({1.0, 0.25}, c0);
        const double scale = absolute_moment(poly, u, w, PExponent(p), 3);
        CHECK(std::abs(signed_moment_adaptive(poly, u, w, PExponent(p), 1e-9 * scale)) <=
              4e-9 * scale);
    }
}
