#pragma once

#include "wpw/ptrig.hpp"
#include "wpw/weights.hpp"

#include <cstdint>
#include <vector>

namespace wpw {

/// Piecewise-linear function on an ascending node set spanning [0, L].
struct DiscreteFunction {
    DiscreteFunction(std::vector<double> nodes_, std::vector<double> values_);

    static DiscreteFunction uniform(double L, int n_nodes, std::vector<double> values);

    std::vector<double> nodes;
    std::vector<double> values;
};

/// The unique shift t* with Int |u - t|^{p-2} (u - t) f = 0 (the integrand sum
/// is strictly decreasing in t), located by bisection over [min u, max u].
/// Throws DegenerateError for constant u.
double optimal_shift(const DiscreteFunction& u, const WeightFunction& w, PExponent p);

/// Discrete weighted Rayleigh quotient
///   Int |u'|^p f / Int |u - t*|^p f
/// with per-cell fixed-order Gauss quadrature (u' is constant per cell).
double quotient(const DiscreteFunction& u, const WeightFunction& w, PExponent p);

/// Quotient together with its analytic gradient with respect to the nodal
/// values. The shift enters only through the stationarity of the denominator
/// in t, so d(t*)/du drops out of the derivative.
struct QuotientGradient {
    double value = 0.0;
    std::vector<double> grad;
};
QuotientGradient quotient_with_gradient(const DiscreteFunction& u, const WeightFunction& w,
                                        PExponent p);

struct MinimizeResult {
    double lambda_h = 0.0;
    DiscreteFunction u;
    bool converged = false;
    int iterations = 0;
};

/// Minimize the discrete quotient over piecewise-linear functions on a
/// uniform mesh of n_nodes.
///
/// p = 2: generalized symmetric eigenproblem (stiffness vs weighted mass) by
/// shift-inverted inverse iteration with the weighted-constant mode deflated.
/// p != 2: gradient descent with backtracking line search, re-shifted each
/// step, multi-start (the p = 2 minimizer plus 4 seeded perturbations of
/// relative scale 0.1). Deterministic in seed.
MinimizeResult minimize_quotient(const WeightFunction& w, PExponent p, int n_nodes,
                                 double tol, std::uint64_t seed);

} // namespace wpw
