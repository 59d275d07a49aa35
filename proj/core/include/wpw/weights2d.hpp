#pragma once

#include "wpw/geometry.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace wpw {

/// Nonnegative log-concave weight on the plane, closed under products.
/// Families: Constant(c > 0); LogLinear exp(g . q); Gaussian
/// exp(-(q-m)^T A (q-m)) with A positive semidefinite.
class Weight2D {
public:
    static Weight2D constant(double c);
    static Weight2D log_linear(Vec2 g);
    static Weight2D gaussian(double a11, double a12, double a22, Vec2 m);
    static Weight2D product(std::vector<Weight2D> factors);

    double log_value(Vec2 q) const;
    double evaluate(Vec2 q) const;

private:
    Weight2D() = default;
    // 0: constant, 1: log-linear, 2: gaussian, 3: product
    int kind_ = 0;
    double c_ = 1.0;
    Vec2 g_{0, 0};
    double a11_ = 0, a12_ = 0, a22_ = 0;
    Vec2 m_{0, 0};
    std::vector<Weight2D> factors_;
};

/// Deterministic seeded generator of valid 2D log-concave weights with
/// moderate anisotropy (log-slopes up to ~4, curvatures up to ~6).
Weight2D random_weight_2d(std::uint64_t seed);

/// Scalar test field with an analytic gradient, as required by the slicing
/// reduction residuals.
struct ScalarField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;
};

/// u(q) = g . q - c.
ScalarField linear_field(Vec2 g, double c);

} // namespace wpw
