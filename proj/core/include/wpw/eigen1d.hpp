#pragma once

#include "wpw/ptrig.hpp"
#include "wpw/weights.hpp"

#include <utility>
#include <vector>

namespace wpw {

/// A weighted 1D Neumann p-Laplacian eigenvalue problem on [0, L].
/// Construction certifies the weight: log-concave (midpoint test on 1001
/// points) and strictly positive in the interior of the interval.
struct EigenProblem {
    EigenProblem(WeightFunction w, PExponent p_exp);

    WeightFunction weight;
    double L;
    PExponent p;
};

/// One sample of the eigenvalue scan: terminal momentum and the number of
/// interior sign changes of u at this trial lambda.
struct ScanSample {
    double lambda;
    double w_end;
    int zero_count;
};

/// Outcome of a single shot of the initial value problem
///   u' = sign(w) (|w|/f)^(1/(p-1)),   w' = -lambda f |u|^(p-2) u,
///   u(0) = 1, w(0) = 0,
/// integrated over [0, L] with adaptive Dormand-Prince 5(4).
///
/// Sign changes of u are counted with a hysteresis band of 1e-9 times the
/// running maximum of |u|: strongly decaying weights shrink u below the
/// integration noise floor near the far endpoint, and flips inside the band
/// are indistinguishable from roundoff.
struct ShootResult {
    double w_end = 0.0;
    int zero_count = 0;
    std::vector<std::pair<double, double>> trace; // (x, u) at accepted steps
    int flip_prev_index = -1; // last confirmed-positive trace point before the first flip
    int flip_index = -1;      // first confirmed-negative trace point
};

/// Converged first nontrivial eigenvalue with diagnostics.
struct EigenResult {
    double lambda = 0.0;
    double x_zero = 0.0;                          // interior zero of u
    std::vector<std::pair<double, double>> trace; // (x, u)
    double shoot_residual = 0.0;                  // |w(L)| at convergence
    std::pair<double, double> bracket{0.0, 0.0};  // final (lambda_lo, lambda_hi)
    std::vector<ScanSample> scan;                 // coarse scan diagnostics
};

/// Result of the exponential reduction check (Lemma-style chain
/// lambda(f) >= lambda(e^{kappa x}) >= (pi_p/L)^p with kappa = h'(x_zero)).
struct KappaReductionReport {
    double lambda_f = 0.0;
    double x_zero = 0.0;
    double kappa = 0.0;
    double lambda_exp = 0.0;
    double wirtinger_bound = 0.0;
    double tol = 0.0;
    bool chain_holds = false;
};

/// Integrate the shooting system at a trial eigenvalue. `steps` caps the
/// coarsest trace spacing at L/steps. Throws StiffnessError on step
/// underflow.
ShootResult shoot(const EigenProblem& prob, double lambda, int steps = 512,
                  double rtol = 1e-11);

/// Smallest lambda > 0 with w(L; lambda) = 0 and a single interior sign
/// change: coarse geometric scan from (pi_p/(2L))^p (ratio 1.5, cap
/// (100 pi_p/L)^p), then bisection to relative width tol. Throws
/// BracketError if the scan cap is reached, SolverError if the Sturm
/// ordering of zero counts is violated or the converged trace does not
/// change sign exactly once.
EigenResult first_nontrivial_eigenvalue(const EigenProblem& prob, double tol);

/// Independent semi-analytic eigenvalue for exponential weights e^{kappa x}:
/// the root mu of the Riccati length identity
///   L = Int_{-inf}^{inf} dv / (1 + (mu |v|^p + kappa v)/(p-1)),
/// strictly decreasing in mu on the admissible range where the denominator
/// stays positive. Throws BracketError if no admissible bracket exists.
double exponential_eigenvalue(PExponent p, double kappa, double L, double tol);

/// Computes lambda(f) and x_zero by shooting, sets kappa = h'(x_zero),
/// computes the exponential eigenvalue for that kappa, and reports the
/// inequality chain lambda(f) >= lambda_exp >= (pi_p/L)^p up to relative
/// slack tol.
KappaReductionReport kappa_reduction_check(const EigenProblem& prob, double tol);

} // namespace wpw
