#include "wpw/weights2d.hpp"
#include "wpw/errors.hpp"

#include <cmath>

namespace wpw {

namespace {
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
};
} // namespace

Weight2D Weight2D::constant(double c) {
    if (!(c > 0.0))
        throw DomainError("Weight2D constant requires c > 0");
    Weight2D w;
    w.kind_ = 0;
    w.c_ = c;
    return w;
}

Weight2D Weight2D::log_linear(Vec2 g) {
    Weight2D w;
    w.kind_ = 1;
    w.g_ = g;
    return w;
}

Weight2D Weight2D::gaussian(double a11, double a12, double a22, Vec2 m) {
    if (!(a11 >= 0.0 && a22 >= 0.0 && a11 * a22 - a12 * a12 >= -1e-15))
        throw DomainError("Weight2D gaussian matrix must be positive semidefinite");
    Weight2D w;
    w.kind_ = 2;
    w.a11_ = a11;
    w.a12_ = a12;
    w.a22_ = a22;
    w.m_ = m;
    return w;
}

Weight2D Weight2D::product(std::vector<Weight2D> factors) {
    if (factors.empty())
        throw DomainError("Weight2D product needs at least one factor");
    Weight2D w;
    w.kind_ = 3;
    w.factors_ = std::move(factors);
    return w;
}

double Weight2D::log_value(Vec2 q) const {
    switch (kind_) {
        case 0:
            return std::log(c_);
        case 1:
            return g_.dot(q);
        case 2: {
            const Vec2 d = q - m_;
            return -(a11_ * d.x * d.x + 2.0 * a12_ * d.x * d.y + a22_ * d.y * d.y);
        }
        default: {
            double acc = 0.0;
            for (const auto& f : factors_)
                acc += f.log_value(q);
            return acc;
        }
    }
}

double Weight2D::evaluate(Vec2 q) const { return std::exp(log_value(q)); }

Weight2D random_weight_2d(std::uint64_t seed) {
    SplitMix64 rng(seed * 0x2545f4914f6cdd1dULL + 0xbf58476d1ce4e5b9ULL);
    switch (rng.next() % 4) {
        case 0:
            return Weight2D::constant(rng.uniform(0.2, 3.0));
        case 1:
            return Weight2D::log_linear(
                {rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)});
        case 2: {
            const double a = rng.uniform(0.0, 6.0);
            const double b = rng.uniform(0.0, 6.0);
            const double r = rng.uniform(-0.9, 0.9) * std::sqrt(a * b);
            return Weight2D::gaussian(a, r, b,
                                      {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
        }
        default:
            return Weight2D::product(
                {Weight2D::log_linear({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)}),
                 Weight2D::gaussian(rng.uniform(0.0, 4.0), 0.0, rng.uniform(0.0, 4.0),
                                    {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)})});
    }
}

ScalarField linear_field(Vec2 g, double c) {
    ScalarField f;
    f.value = [g, c](Vec2 q) { return g.dot(q) - c; };
    f.gradient = [g](Vec2) { return g; };
    return f;
}

} // namespace wpw
