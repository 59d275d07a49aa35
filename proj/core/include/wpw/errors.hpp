#pragma once

#include <stdexcept>
#include <string>

namespace wpw {

// Base class for every failure signalled by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the domain of an operation (x outside [0,L], bad parameter ranges, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Weight vanishes where it must not (f = 0 at an evaluation point of h', or on a
// set of positive measure inside the interval).
class SingularWeightError : public Error {
public:
    explicit SingularWeightError(const std::string& msg) : Error(msg) {}
};

// Quadrature did not reach the requested tolerance within its budget.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& msg, double achieved)
        : Error(msg), achieved_error(achieved) {}
    double achieved_error;
};

// Eigenvalue scan exhausted its cap without bracketing a sign change.
class BracketError : public Error {
public:
    explicit BracketError(const std::string& msg) : Error(msg) {}
};

// Adaptive step-size control underflowed; `location` is the abscissa reached.
class StiffnessError : public Error {
public:
    StiffnessError(const std::string& msg, double where)
        : Error(msg), location(where) {}
    double location;
};

// Internal consistency failure of an eigenvalue solve (Sturm ordering violated,
// converged eigenfunction without exactly one interior zero, ...).
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

// Objective degenerate (constant test function, vanishing denominator).
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

// balanced_cut could not zero the moment at any direction; `theta` is the last
// direction attempted.
class CutFailureError : public Error {
public:
    CutFailureError(const std::string& msg, double theta_)
        : Error(msg), theta(theta_) {}
    double theta;
};

// Recursion depth cap exceeded in the decomposition (tol / epsilon mismatch).
class DepthError : public Error {
public:
    explicit DepthError(const std::string& msg) : Error(msg) {}
};

// Mesh generation failed (degenerate polygon, no interior points, ...).
class MeshError : public Error {
public:
    explicit MeshError(const std::string& msg) : Error(msg) {}
};

} // namespace wpw
