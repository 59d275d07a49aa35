#include "wpw/slicing.hpp"
#include "wpw/errors.hpp"
#include "wpw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace wpw {

namespace {

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }
inline double odd_pow(double u, double q) {
    return u == 0.0 ? 0.0 : sgn(u) * std::pow(std::abs(u), q);
}

// Degree-5 symmetric 7-point rule on a triangle (weights sum to 1).
struct TriRule {
    double b1[7], b2[7], w[7];
    TriRule() {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 + s15) / 21.0, a2 = (9.0 - 2.0 * s15) / 21.0;
        const double c1 = (6.0 - s15) / 21.0, c2 = (9.0 + 2.0 * s15) / 21.0;
        const double wa = (155.0 + s15) / 1200.0, wc = (155.0 - s15) / 1200.0;
        b1[0] = 1.0 / 3.0; b2[0] = 1.0 / 3.0; w[0] = 0.225;
        b1[1] = a2; b2[1] = a1; w[1] = wa;
        b1[2] = a1; b2[2] = a2; w[2] = wa;
        b1[3] = a1; b2[3] = a1; w[3] = wa;
        b1[4] = c2; b2[4] = c1; w[4] = wc;
        b1[5] = c1; b2[5] = c2; w[5] = wc;
        b1[6] = c1; b2[6] = c1; w[6] = wc;
    }
};
const TriRule kTriRule;

template <class F>
double integrate_triangle(Vec2 a, Vec2 b, Vec2 c, int refinements, F&& f) {
    if (refinements > 0) {
        const Vec2 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
        return integrate_triangle(a, ab, ca, refinements - 1, f) +
               integrate_triangle(ab, b, bc, refinements - 1, f) +
               integrate_triangle(ca, bc, c, refinements - 1, f) +
               integrate_triangle(ab, bc, ca, refinements - 1, f);
    }
    const double area2 = (b - a).cross(c - a); // twice the signed area
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) {
        const Vec2 q = a + (b - a) * kTriRule.b1[i] + (c - a) * kTriRule.b2[i];
        acc += kTriRule.w[i] * f(q);
    }
    return 0.5 * area2 * acc;
}

template <class F>
double integrate_polygon(const ConvexPolygon& poly, int refinements, F&& f) {
    const Vec2 c = poly.centroid();
    const auto& v = poly.vertices();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += integrate_triangle(c, v[i], v[(i + 1) % v.size()], refinements, f);
    return acc;
}

double abs_moment(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                  double p, int refinements) {
    return integrate_polygon(poly, refinements, [&](Vec2 q) {
        return std::pow(std::abs(u.value(q)), p - 1.0) * w.evaluate(q);
    });
}

double moment_of(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                 double p, int refinements) {
    return integrate_polygon(poly, refinements, [&](Vec2 q) {
        return odd_pow(u.value(q), p - 1.0) * w.evaluate(q);
    });
}

// Moment with a per-evaluation refinement ladder: refine until the Richardson
// step drops below target_abs, or (when only the sign matters) until the
// value dwarfs the step.
double moment_ladder(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                     double p, double target_abs, bool sign_exit, int r_lo = 1,
                     int r_hi = 5) {
    double m = moment_of(poly, u, w, p, r_lo);
    for (int r = r_lo; r < r_hi; ++r) {
        const double next = moment_of(poly, u, w, p, r + 1);
        const double err = std::abs(next - m);
        m = next;
        if (err <= 0.25 * target_abs)
            break;
        if (sign_exit && std::abs(m) >= 4.0 * err)
            break;
    }
    return m;
}

struct BalancedOffset {
    double c = 0.0;      // offset of the area-bisecting line
    double moment = 0.0; // left-piece signed moment there
};

// For each direction the area-bisecting offset is unique and continuous in
// theta (the left area is strictly increasing in c), so the left moment
// M(theta) along it is continuous; swapping sides at theta + pi gives
// M(theta + pi) = -M(theta) when the global moment vanishes, which forces a
// zero of M on [0, pi). Scanning directions for a sign change of M and
// bisecting is therefore a complete search; zeroing the moment in c first
// makes the offset branch discontinuous and can chase sign flips that never
// pass through zero.
class CutSearch {
public:
    CutSearch(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w, double p,
              double tol_m, int r_lo)
        : poly_(poly), u_(u), w_(w), p_(p), tol_m_(tol_m), r_lo_(r_lo),
          area_(poly.area()) {}

    BalancedOffset balanced_offset(double theta) const {
        const Vec2 n = CutLine{theta, 0.0}.normal();
        double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
        for (const Vec2& q : poly_.vertices()) {
            cmin = std::min(cmin, q.dot(n));
            cmax = std::max(cmax, q.dot(n));
        }
        double lo = cmin, hi = cmax;
        for (int it = 0; it < 90 && (hi - lo) > 1e-16 * (cmax - cmin); ++it) {
            const double mid = 0.5 * (lo + hi);
            (left_area(theta, mid) < 0.5 * area_ ? lo : hi) = mid;
        }
        BalancedOffset out;
        out.c = 0.5 * (lo + hi);
        out.moment = left_moment(theta, out.c);
        return out;
    }

    double area_imbalance(double theta, double c) const {
        return std::abs(2.0 * left_area(theta, c) - area_) / area_;
    }

private:
    double left_moment(double theta, double c) const {
        auto [left, right] = clip(poly_, CutLine{theta, c});
        (void)right;
        return left ? moment_ladder(*left, u_, w_, p_, tol_m_, /*sign_exit=*/true, r_lo_)
                    : 0.0;
    }
    double left_area(double theta, double c) const {
        auto [left, right] = clip(poly_, CutLine{theta, c});
        (void)right;
        return left ? left->area() : 0.0;
    }

    const ConvexPolygon& poly_;
    const ScalarField& u_;
    const Weight2D& w_;
    double p_;
    double tol_m_;
    int r_lo_;
    double area_;
};

CutLine balanced_cut_attempt(const ConvexPolygon& poly, const ScalarField& u,
                             const Weight2D& w, double p, double tol_m, int r_lo) {
    CutSearch search(poly, u, w, p, tol_m, r_lo);

    constexpr int NT = 48;
    BalancedOffset roots[NT];
    double thetas[NT];
    for (int j = 0; j < NT; ++j) {
        thetas[j] = std::numbers::pi * j / NT;
        roots[j] = search.balanced_offset(thetas[j]);
        if (std::abs(roots[j].moment) <= tol_m)
            return CutLine{thetas[j], roots[j].c};
    }

    double last_theta = 0.0;
    for (int j = 0; j < NT; ++j) {
        const int k = (j + 1) % NT;
        const double Mj = roots[j].moment;
        // side swap at theta + pi flips the sign of the wrap partner
        const double Mk = (k == 0) ? -roots[k].moment : roots[k].moment;
        if (Mj * Mk > 0.0)
            continue;
        double tlo = thetas[j];
        const double span = std::numbers::pi / NT;
        double thi = tlo + span;
        double Mlo = Mj;
        last_theta = tlo;
        for (int it = 0; it < 200; ++it) {
            const double tm = 0.5 * (tlo + thi);
            BalancedOffset r = search.balanced_offset(tm);
            if (std::abs(r.moment) <= tol_m)
                return CutLine{tm, r.c};
            if (r.moment * Mlo <= 0.0) {
                thi = tm;
            } else {
                tlo = tm;
                Mlo = r.moment;
            }
            if ((thi - tlo) < 1e-15)
                break; // moment noise floor reached without meeting tol_m
        }
    }
    throw CutFailureError("balanced_cut: no direction zeroes the moment on the "
                          "area-bisecting line",
                          last_theta);
}

} // namespace

double signed_moment(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                     PExponent p, int refinements) {
    return moment_of(poly, u, w, p.value(), refinements);
}

double signed_moment_adaptive(const ConvexPolygon& poly, const ScalarField& u,
                              const Weight2D& w, PExponent p, double target_abs) {
    return moment_ladder(poly, u, w, p.value(), target_abs, /*sign_exit=*/false);
}

double absolute_moment(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                       PExponent p, int refinements) {
    return abs_moment(poly, u, w, p.value(), refinements);
}

namespace {

// Absolute-tolerance entry; retries from a deeper base level on failure.
CutLine balanced_cut_abs(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                         double p, double tol_m_abs) {
    for (int r_lo = 1;; r_lo += 2) {
        try {
            return balanced_cut_attempt(poly, u, w, p, tol_m_abs, r_lo);
        } catch (const CutFailureError&) {
            if (r_lo >= 5)
                throw;
        }
    }
}

} // namespace

CutLine balanced_cut(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                     PExponent p, double tol) {
    if (!(tol > 0.0))
        throw DomainError("balanced_cut requires tol > 0");
    const double scale = abs_moment(poly, u, w, p.value(), 2);
    return balanced_cut_abs(poly, u, w, p.value(), tol * std::max(scale, 1e-300));
}

namespace {

Slice make_slice(ConvexPolygon piece, const ScalarField& u, const Weight2D& w, double p,
                 double moment_target_abs) {
    const WidthResult wr = polygon_width(piece);
    const Vec2 nu = wr.direction;
    const Vec2 e1 = nu.perp();
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    for (const Vec2& q : piece.vertices()) {
        amin = std::min(amin, q.dot(e1));
        amax = std::max(amax, q.dot(e1));
    }
    const double c2 = piece.centroid().dot(nu);
    Slice s{std::move(piece), e1 * amin + nu * c2, e1, amax - amin, wr.width, 0.0};
    s.moment = moment_ladder(s.polygon, u, w, p, moment_target_abs, /*sign_exit=*/false);
    return s;
}

void decompose_rec(ConvexPolygon piece, const ScalarField& u, const Weight2D& w, double p,
                   double epsilon, double cut_tol_abs, double moment_target_abs, int depth,
                   Decomposition& out) {
    if (piece.area() <= 0.5 * epsilon * epsilon * (1.0 + 1e-9)) {
        out.slices.push_back(make_slice(std::move(piece), u, w, p, moment_target_abs));
        return;
    }
    if (depth >= 64)
        throw DepthError("decomposition exceeded 64 levels: tol/epsilon mismatch");
    const CutLine cut = balanced_cut_abs(piece, u, w, p, cut_tol_abs);
    auto [left, right] = clip(piece, cut);
    if (!left || !right)
        throw SolverError("balanced cut failed to split the piece");
    decompose_rec(std::move(*left), u, w, p, epsilon, cut_tol_abs, moment_target_abs,
                  depth + 1, out);
    decompose_rec(std::move(*right), u, w, p, epsilon, cut_tol_abs, moment_target_abs,
                  depth + 1, out);
}

} // namespace

Decomposition decompose(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                        PExponent pe, double epsilon, double tol) {
    if (!(epsilon > 0.0) || !(tol > 0.0))
        throw DomainError("decompose requires epsilon > 0 and tol > 0");
    const double p = pe.value();
    const double total_area = poly.area();
    const double scale = abs_moment(poly, u, w, p, 3);
    const double moment_tol = tol * std::max(scale, 1e-300);

    const double m0 = moment_ladder(poly, u, w, p, 0.05 * moment_tol, /*sign_exit=*/false);
    if (std::abs(m0) > 0.25 * moment_tol)
        throw DomainError("decompose requires a pre-shifted field: |global moment| = " +
                          std::to_string(std::abs(m0)));

    // Absolute per-cut budget: every cut leaves at most cut_tol_abs of moment
    // in each child (including the fan-quadrature mismatch controlled by the
    // same target), so the leakage along any root-to-slice path stays below
    // moment_tol across the whole recursion depth.
    const int depth_estimate =
        4 + std::max(1, static_cast<int>(std::ceil(
                            std::log2(total_area / (0.5 * epsilon * epsilon)))));
    const double cut_tol_abs = moment_tol / (4.0 * depth_estimate);

    Decomposition out;
    out.epsilon = epsilon;
    out.moment_tol = moment_tol;
    decompose_rec(poly, u, w, p, epsilon, cut_tol_abs, 0.1 * moment_tol, 0, out);

    double covered = 0.0;
    for (const Slice& s : out.slices) {
        covered += s.polygon.area();
        if (std::abs(s.moment) > moment_tol)
            throw SolverError("slice moment exceeds the decomposition tolerance");
        if (s.width > epsilon * (1.0 + 1e-9))
            throw SolverError("slice width exceeds epsilon");
    }
    if (std::abs(covered - total_area) > 1e-9 * total_area)
        throw SolverError("decomposition lost area: clip bookkeeping is inconsistent");
    return out;
}

double cross_section(const Slice& slice, double t, int /*samples*/) {
    if (!(t >= -1e-9 * slice.length && t <= slice.length * (1.0 + 1e-9)))
        throw DomainError("cross_section parameter outside [0, d_i]");
    t = std::clamp(t, 0.0, slice.length);
    const Vec2 nu = slice.e1.perp();
    const auto& v = slice.polygon.vertices();

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool any = false;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % m];
        const double fa = (a - slice.origin).dot(slice.e1) - t;
        const double fb = (b - slice.origin).dot(slice.e1) - t;
        if (fa == 0.0) {
            const double x2 = (a - slice.origin).dot(nu);
            lo = std::min(lo, x2);
            hi = std::max(hi, x2);
            any = true;
        }
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
            const double s = fa / (fa - fb);
            const Vec2 q = a + (b - a) * s;
            const double x2 = (q - slice.origin).dot(nu);
            lo = std::min(lo, x2);
            hi = std::max(hi, x2);
            any = true;
        }
    }
    return any ? std::max(0.0, hi - lo) : 0.0;
}

EigenProblem reduce_to_1d(const Slice& slice, const Weight2D& w, PExponent p) {
    const double d = slice.length;
    if (!(d > 1e-12))
        throw DegenerateError("reduce_to_1d: slice extent is numerically zero");

    constexpr int N = 257;
    double t[N], raw[N];
    double fmax = 0.0;
    for (int j = 0; j < N; ++j) {
        t[j] = d * j / (N - 1.0);
        raw[j] = cross_section(slice, t[j]) * w.evaluate(slice.origin + slice.e1 * t[j]);
        fmax = std::max(fmax, raw[j]);
    }
    if (!(fmax > 0.0))
        throw DegenerateError("reduce_to_1d: induced weight vanishes identically");

    // contiguous positive run around the peak
    int jpeak = 0;
    for (int j = 1; j < N; ++j)
        if (raw[j] > raw[jpeak])
            jpeak = j;
    const double cutoff = fmax * 1e-12;
    int j0 = jpeak, j1 = jpeak;
    while (j0 > 0 && raw[j0 - 1] > cutoff)
        --j0;
    while (j1 < N - 1 && raw[j1 + 1] > cutoff)
        ++j1;

    std::vector<double> bp, lv;
    if (j1 == j0) {
        // single positive sample: a steep log-concave tent around it
        const double G = 60.0 * (N - 1.0) / d;
        const double pk = std::log(raw[jpeak] / fmax);
        if (j0 > 0) {
            bp.push_back(0.0);
            lv.push_back(pk - G * t[j0]);
        }
        bp.push_back(t[j0]);
        lv.push_back(pk);
        if (j1 < N - 1) {
            bp.push_back(d);
            lv.push_back(pk - G * (d - t[j1]));
        }
        if (bp.size() < 2) { // run covers the whole grid: constant fallback
            bp = {0.0, d};
            lv = {pk, pk};
        }
    } else {
        const int n = j1 - j0 + 1;
        std::vector<double> slopes(static_cast<std::size_t>(n) - 1);
        const double h = d / (N - 1.0);
        double prev = std::numeric_limits<double>::infinity();
        for (int j = j0; j < j1; ++j) {
            double s = (std::log(raw[j + 1] / fmax) - std::log(raw[j] / fmax)) / h;
            if (s > prev) {
                if (s - prev > 1e-9)
                    throw DomainError("reduce_to_1d: induced weight fails log-concavity "
                                      "beyond rounding repair");
                s = prev; // clip the ascending rounding violation
            }
            slopes[static_cast<std::size_t>(j - j0)] = s;
            prev = s;
        }
        bp.reserve(static_cast<std::size_t>(n) + 2);
        lv.reserve(static_cast<std::size_t>(n) + 2);
        if (j0 > 0) {
            bp.push_back(0.0);
            lv.push_back(std::log(raw[j0] / fmax) - slopes.front() * t[j0]);
        }
        bp.push_back(t[j0]);
        lv.push_back(std::log(raw[j0] / fmax));
        for (int j = j0 + 1; j <= j1; ++j) {
            bp.push_back(t[j]);
            lv.push_back(lv.back() + slopes[static_cast<std::size_t>(j - 1 - j0)] * h);
        }
        if (j1 < N - 1) {
            bp.push_back(d);
            lv.push_back(lv.back() + slopes.back() * (d - t[j1]));
        }
    }
    // breakpoints must end exactly at d
    bp.back() = d;
    return EigenProblem(WeightFunction::piecewise_log_linear(std::move(bp), std::move(lv)), p);
}

ReductionResiduals reduction_residuals(const Slice& slice, const ScalarField& u,
                                       const Weight2D& w, PExponent pe) {
    if (!u.gradient)
        throw DomainError("reduction_residuals needs a field with a gradient");
    const double p = pe.value();
    const Vec2 e1 = slice.e1;
    auto centerline = [&](double t) { return slice.origin + e1 * t; };
    auto f_exact = [&](double t) {
        return cross_section(slice, std::clamp(t, 0.0, slice.length)) *
               w.evaluate(centerline(t));
    };

    // 1D integration split at the vertex projections (f is piecewise smooth)
    std::vector<double> cuts{0.0, slice.length};
    for (const Vec2& q : slice.polygon.vertices())
        cuts.push_back(std::clamp((q - slice.origin).dot(e1), 0.0, slice.length));
    std::sort(cuts.begin(), cuts.end());
    auto int1d = [&](auto&& f) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            if (b - a <= 1e-15 * slice.length)
                continue;
            const double m = 0.5 * (a + b);
            acc += gauss8(f, a, m) + gauss8(f, m, b);
        }
        return acc;
    };

    const double lhs1 = integrate_polygon(slice.polygon, 2, [&](Vec2 q) {
        return std::pow(std::abs(u.gradient(q).dot(e1)), p) * w.evaluate(q);
    });
    const double rhs1 = int1d([&](double t) {
        return std::pow(std::abs(u.gradient(centerline(t)).dot(e1)), p) * f_exact(t);
    });

    const double lhs2 = integrate_polygon(slice.polygon, 2, [&](Vec2 q) {
        return std::pow(std::abs(u.value(q)), p) * w.evaluate(q);
    });
    const double rhs2 = int1d(
        [&](double t) { return std::pow(std::abs(u.value(centerline(t))), p) * f_exact(t); });

    const double r3 =
        int1d([&](double t) { return odd_pow(u.value(centerline(t)), p - 1.0) * f_exact(t); });

    return {std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2), std::abs(r3)};
}

} // namespace wpw
