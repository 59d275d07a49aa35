#pragma once

#include "wpw/quadrature.hpp"

namespace wpw {

/// Integrability exponent p > 1. Construction rejects p <= 1.
class PExponent {
public:
    explicit PExponent(double p);
    double value() const { return p_; }
    /// Conjugate exponent p / (p - 1).
    PExponent conjugate() const { return PExponent(p_ / (p_ - 1.0)); }

private:
    double p_;
};

/// pi_p = 2*pi*(p-1)^(1/p) / (p*sin(pi/p)), the sharp one-dimensional
/// Poincare-Wirtinger constant scale. pi_2 == pi.
double pi_p_closed(PExponent p);

/// pi_p by direct quadrature of 2*Int_0^inf ds / (1 + s^p/(p-1)) to absolute
/// accuracy tol: the integral is split at s = 1 and the tail mapped onto
/// (0, 1] by s -> 1/t so both pieces are proper integrals.
/// Throws QuadratureError (with the achieved estimate) if tol is not met.
double pi_p_quadrature(PExponent p, double tol);

/// As above but returning the achieved error estimate alongside the value.
QuadResult pi_p_quadrature_result(PExponent p, double tol);

} // namespace wpw
