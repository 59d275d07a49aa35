#pragma once

#include "wpw/eigen1d.hpp"
#include "wpw/geometry.hpp"
#include "wpw/mesh2d.hpp"
#include "wpw/slicing.hpp"
#include "wpw/weights2d.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wpw {

/// Machine-checkable record of one instance of the sharp bound
/// lambda >= (pi_p / scale)^p. pass iff margin >= -rel_tol * bound.
struct BoundCertificate {
    std::string kind; // proposition_1d | lemma_exponential | lemma_reduction | theorem_2d
    double p = 0.0;
    double scale = 0.0;           // L in 1D, diameter in 2D
    double computed_lambda = 0.0; // smallest nontrivial eigenvalue found
    double bound = 0.0;           // (pi_p / scale)^p
    double margin = 0.0;          // computed_lambda - bound, exactly
    double rel_tol = 0.0;
    double oracle_lambda = 0.0;   // independent-oracle value when one was run, else 0
    double oracle_rel_tol = 0.0;  // agreement tolerance demanded of the oracle
    bool pass = false;
    std::string provenance;
};

BoundCertificate make_certificate(std::string kind, double p, double scale,
                                  double computed_lambda, double rel_tol,
                                  std::string provenance);

/// Proposition-style sweep: for each seed in [seed_begin, seed_end) and each
/// p in p_grid, draw a random log-concave weight on [0, L], solve by
/// shooting, and certify lambda >= (pi_p/L)^p. For p = 2 the discretized
/// Rayleigh oracle is run as well (n_nodes = 2001) and must agree to
/// oracle_tol; for p != 2 it runs on seeds divisible by oracle_stride.
/// Solver failures become failed certificates carrying the diagnostic.
std::vector<BoundCertificate> verify_proposition(std::uint64_t seed_begin,
                                                 std::uint64_t seed_end,
                                                 const std::vector<double>& p_grid, double L,
                                                 double tol, double oracle_tol = 1e-4,
                                                 std::uint64_t oracle_stride = 40);

/// Discrete first nontrivial Neumann eigenvalue of the weighted p-quotient
/// over P1 functions on a triangulation with target edge length mesh_h.
/// p = 2: generalized eigenproblem with the weighted-constant mode deflated;
/// p != 2: shifted-quotient descent from the p = 2 minimizer.
double fem_lambda_2d(const ConvexPolygon& poly, const Weight2D& w, PExponent p,
                     double mesh_h, std::uint64_t seed = 0);

/// Theorem-style 2D certificate: lambda_h >= (pi_p / diameter)^p - rel_tol*bound.
BoundCertificate verify_theorem_2d(const ConvexPolygon& poly, const Weight2D& w, PExponent p,
                                   double mesh_h, double tol, std::string provenance = "");

/// Slice-by-slice verification of the sliced bound at one epsilon.
struct SlicingReport {
    double epsilon = 0.0;
    int slice_count = 0;
    bool all_pass = false;
    double min_margin = 0.0;          // over slices, against (pi_p/d)^p
    double max_residual_rate = 0.0;   // max over slices of (r1+r2+r3)/area
    double moment_tol = 0.0;
    double max_moment = 0.0;
    std::vector<BoundCertificate> certificates;
};
SlicingReport verify_slicing_bound(const ConvexPolygon& poly, const ScalarField& u,
                                   const Weight2D& w, PExponent p, double epsilon,
                                   double tol);

/// Shift c so that u = field - c has vanishing global signed moment on poly
/// (the 2D analogue of the 1D optimal shift).
double zero_moment_shift(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                         PExponent p);

} // namespace wpw
