#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace wpw {

/// A nonnegative log-concave weight f on an interval [0, L], stored as a
/// tagged family with analytic log-derivative where available.
///
/// Families:
///   Constant(c)           f = c, c > 0
///   Exponential(kappa)    f = exp(kappa x)      (h(x) = kappa x stored exactly)
///   LogQuadratic(a, m)    f = exp(-a (x-m)^2),  a >= 0
///   Power(alpha, x0)      f = max(x - x0, 0)^alpha,  alpha >= 0
///   PiecewiseLogLinear    log f linear between ascending breakpoints
///   Product               pointwise product of weights on the same interval
///
/// All families except PiecewiseLogLinear are log-concave by their parameter
/// constraints. Piecewise candidates are constructible with arbitrary slopes
/// so that validate_log_concavity can act as the certification gate; solvers
/// reject uncertified weights at EigenProblem construction.
class WeightFunction {
public:
    enum class Family { Constant, Exponential, LogQuadratic, Power, PiecewiseLogLinear, Product };

    struct ConstantP { double c; };
    struct ExponentialP { double kappa; };
    struct LogQuadraticP { double a, m; };
    struct PowerP { double alpha, x0; };
    struct PiecewiseP {
        std::vector<double> breakpoints; // ascending, spanning [0, L]
        std::vector<double> logvalues;   // log f at each breakpoint
    };
    struct ProductP { std::vector<WeightFunction> factors; };

    static WeightFunction constant(double c, double L);
    static WeightFunction exponential(double kappa, double L);
    static WeightFunction log_quadratic(double a, double m, double L);
    static WeightFunction power(double alpha, double x0, double L);
    static WeightFunction piecewise_log_linear(std::vector<double> breakpoints,
                                               std::vector<double> logvalues);
    static WeightFunction product(std::vector<WeightFunction> factors);

    Family family() const;
    double length() const { return L_; }

    /// f(x). Throws DomainError for x outside [0, L].
    double evaluate(double x) const;

    /// log f(x); -inf where f vanishes. Same domain check as evaluate.
    double log_value(double x) const;

    /// d/dx log f(x). Piecewise breakpoints take the right-hand slope (the
    /// final breakpoint takes the left-hand one). Throws SingularWeightError
    /// where f(x) = 0.
    double log_derivative(double x) const;

    /// Same profile restricted to [0, L1], L1 <= L.
    WeightFunction restricted(double L1) const;

    /// c * f for c > 0 (log-concavity is preserved).
    WeightFunction scaled(double c) const;

    const std::variant<ConstantP, ExponentialP, LogQuadraticP, PowerP, PiecewiseP, ProductP>&
    params() const { return node_; }

private:
    WeightFunction() = default;
    std::variant<ConstantP, ExponentialP, LogQuadraticP, PowerP, PiecewiseP, ProductP> node_;
    double L_ = 0.0;
};

/// Midpoint concavity test of log f on a uniform grid of grid_size points,
/// restricted to points where f > 0:
///   log f(x_{i+1}) >= (log f(x_i) + log f(x_{i+2})) / 2 - tol.
bool validate_log_concavity(const WeightFunction& w, int grid_size, double tol);

/// True iff f > 0 at every interior point of a uniform grid (log-concave
/// weights vanishing at an interior point vanish on a whole subinterval, so
/// this detects weights the eigenvalue solver must reject).
bool positive_in_interior(const WeightFunction& w, int grid_size = 1001);

/// Deterministic seeded generator of valid log-concave weights on [0, L].
/// Parameter ranges: kappa in [-10, 10]; a in [0, 20]; m in [-L, 2L];
/// alpha in [0, 4] with x0 = 0 (endpoint-vanishing) half the time, else
/// x0 in [-L, 0); piecewise families with at most 8 breakpoints and slopes
/// drawn decreasing; products of 2-3 smooth factors.
WeightFunction random_log_concave(std::uint64_t seed, double L);

/// As random_log_concave but restricted to smooth, strictly positive families
/// (Constant, Exponential, LogQuadratic and their products), as required by
/// the exponential-reduction check.
WeightFunction random_smooth_log_concave(std::uint64_t seed, double L);

} // namespace wpw
