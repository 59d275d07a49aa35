#pragma once

#include "wpw/eigen1d.hpp"
#include "wpw/geometry.hpp"
#include "wpw/ptrig.hpp"
#include "wpw/weights2d.hpp"

#include <vector>

namespace wpw {

/// Terminal piece of the decomposition, carrying its local frame: the strip
/// runs along e1 over [0, length], and the centroid sits on the e1 axis.
struct Slice {
    ConvexPolygon polygon;
    Vec2 origin;
    Vec2 e1;       // unit direction along the strip
    double length; // d_i: extent along e1
    double width;  // extent across the strip, <= epsilon of the decomposition
    double moment; // measured signed moment, kept for bookkeeping
};

struct Decomposition {
    std::vector<Slice> slices;
    double epsilon = 0.0;
    double moment_tol = 0.0; // absolute bound met by every slice moment
};

/// Int_poly |u|^{p-2} u w dA via centroid-fan triangulation and a degree-5
/// symmetric triangle rule, with `refinements` uniform subdivision levels.
double signed_moment(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                     PExponent p, int refinements = 1);

/// As signed_moment, refining until the Richardson step drops below
/// target_abs (capped at 5 levels).
double signed_moment_adaptive(const ConvexPolygon& poly, const ScalarField& u,
                              const Weight2D& w, PExponent p, double target_abs);

/// Int_poly |u|^{p-1} w dA: the natural absolute scale for moment tolerances.
double absolute_moment(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                       PExponent p, int refinements = 2);

/// A line splitting poly into two pieces of equal area on each of which the
/// signed moment vanishes (both up to tol, relative to the polygon's absolute
/// moment and area). Directions are searched for a sign change of the left
/// moment along the area-bisecting offset, which exists by continuity and
/// the side swap at theta + pi whenever the global moment vanishes. Throws
/// CutFailureError if no direction qualifies even after quadrature
/// refinement.
CutLine balanced_cut(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                     PExponent p, double tol);

/// Recursive bisection by balanced cuts until every piece has area <=
/// epsilon^2/2 (which forces width <= epsilon), then builds the slice frames
/// from the minimal-width direction. The caller must pre-shift u so the
/// global signed moment vanishes. Throws DepthError past 64 levels.
Decomposition decompose(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                        PExponent p, double epsilon, double tol);

/// Chord length of the slice at abscissa t along e1 (exact from the edges;
/// `samples` is accepted for interface compatibility and ignored in 2D).
double cross_section(const Slice& slice, double t, int samples = 0);

/// The slice's induced 1D problem on [0, d_i] with weight
/// f_i(t) = cross_section(t) * w(centerline(t)), represented as a certified
/// piecewise log-linear fit on a 257-point grid.
EigenProblem reduce_to_1d(const Slice& slice, const Weight2D& w, PExponent p);

/// Absolute discrepancies of the three slice-reduction identities:
///   r1 = | Int_slice |du/dx1|^p w - Int |v'|^p f_i |
///   r2 = | Int_slice |u|^p w - Int |v|^p f_i |
///   r3 = | Int |v|^{p-2} v f_i |
/// with v the restriction of u to the centerline.
struct ReductionResiduals {
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
};
ReductionResiduals reduction_residuals(const Slice& slice, const ScalarField& u,
                                       const Weight2D& w, PExponent p);

} // namespace wpw
