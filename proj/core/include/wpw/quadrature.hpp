#pragma once

#include <array>
#include <functional>

namespace wpw {

/// Outcome of an adaptive quadrature run. `error` is the accumulated
/// Gauss/Kronrod discrepancy over all subintervals, a conservative
/// estimate of the absolute error of `value`.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7/15 on a finite interval [a, b].
/// Repeatedly bisects the subinterval with the largest error estimate
/// until the summed estimate drops below abs_tol or the interval budget
/// runs out. Endpoints are never evaluated (all nodes are interior), so
/// integrable endpoint singularities are admissible.
QuadResult gk_adaptive(const std::function<double(double)>& f, double a, double b,
                       double abs_tol, int max_intervals = 8192);

/// Same, but throws QuadratureError (carrying the achieved estimate)
/// instead of returning converged = false.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_intervals = 8192);

/// Tail integral over [cut, +inf) for an integrand decaying at least like
/// v^{-q}, q > 1, by the inversion v = cut / t mapping the tail onto (0, 1].
/// cut must be positive.
double integrate_tail(const std::function<double(double)>& f, double cut,
                      double abs_tol, int max_intervals = 8192);

/// Fixed 8-point Gauss-Legendre nodes and weights on [-1, 1], used for the
/// per-cell element integrals of the discrete Rayleigh quotient.
inline constexpr std::array<double, 8> kGauss8Nodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498,  0.1834346424956498,  0.5255324099163290,
     0.7966664774136267,  0.9602898564975363};

inline constexpr std::array<double, 8> kGauss8Weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

/// 8-point Gauss-Legendre approximation of the integral of f over [a, b].
template <class F>
double gauss8(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += kGauss8Weights[i] * f(mid + half * kGauss8Nodes[i]);
    return half * sum;
}

} // namespace wpw
