#include "wpw/bounds.hpp"
#include "wpw/errors.hpp"
#include "wpw/rayleigh.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wpw {

namespace {

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }
inline double odd_pow(double u, double q) {
    return u == 0.0 ? 0.0 : sgn(u) * std::pow(std::abs(u), q);
}

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
};

// 3-point degree-2 rule at edge midpoints, enough for P1 mass with a smooth
// weight sampled per element; gradients are elementwise constant.
struct ElementQuad {
    Vec2 q[3];
    double w[3]; // absolute weights (include the element area)
};

ElementQuad element_quad(Vec2 a, Vec2 b, Vec2 c) {
    ElementQuad e;
    const double area = 0.5 * (b - a).cross(c - a);
    e.q[0] = (a + b) * 0.5;
    e.q[1] = (b + c) * 0.5;
    e.q[2] = (c + a) * 0.5;
    e.w[0] = e.w[1] = e.w[2] = area / 3.0;
    return e;
}

struct Fem2D {
    TriMesh mesh;
    Eigen::SparseMatrix<double> K, M;
    std::vector<double> wq;          // weight at the element quad points (3 per tri)
    std::vector<double> wa;          // weighted element measure Int_T w
    std::vector<std::array<Vec2, 3>> grads; // P1 basis gradients per element

    Fem2D(const ConvexPolygon& poly, const Weight2D& w, double mesh_h)
        : mesh(triangulate(poly, mesh_h)) {
        const int n = static_cast<int>(mesh.points.size());
        std::vector<Eigen::Triplet<double>> tk, tm;
        tk.reserve(mesh.triangles.size() * 9);
        tm.reserve(mesh.triangles.size() * 9);
        wq.reserve(mesh.triangles.size() * 3);
        wa.reserve(mesh.triangles.size());
        grads.reserve(mesh.triangles.size());

        for (const auto& t : mesh.triangles) {
            const Vec2 a = mesh.points[static_cast<std::size_t>(t[0])];
            const Vec2 b = mesh.points[static_cast<std::size_t>(t[1])];
            const Vec2 c = mesh.points[static_cast<std::size_t>(t[2])];
            const double area2 = (b - a).cross(c - a);
            // P1 gradients: grad phi_i = perp(opposite edge) / (2 area)
            std::array<Vec2, 3> g{Vec2{(b.y - c.y) / area2, (c.x - b.x) / area2},
                                  Vec2{(c.y - a.y) / area2, (a.x - c.x) / area2},
                                  Vec2{(a.y - b.y) / area2, (b.x - a.x) / area2}};
            grads.push_back(g);

            const ElementQuad eq = element_quad(a, b, c);
            double wmass = 0.0;
            double ww[3];
            for (int k = 0; k < 3; ++k) {
                ww[k] = w.evaluate(eq.q[k]);
                wq.push_back(ww[k]);
                wmass += eq.w[k] * ww[k];
            }
            wa.push_back(wmass);

            // barycentric values of phi_i at the midpoint quad nodes
            static const double phi[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    tk.emplace_back(t[i], t[j], wmass * g[static_cast<std::size_t>(i)].dot(
                                                            g[static_cast<std::size_t>(j)]));
                    double mij = 0.0;
                    for (int k = 0; k < 3; ++k)
                        mij += eq.w[k] * ww[k] * phi[i][k] * phi[j][k];
                    tm.emplace_back(t[i], t[j], mij);
                }
        }
        K.resize(n, n);
        M.resize(n, n);
        K.setFromTriplets(tk.begin(), tk.end());
        M.setFromTriplets(tm.begin(), tm.end());
    }
};

// Smallest nontrivial eigenvalue of (K, M) by shift-inverted inverse
// iteration, deflating the weighted-constant mode.
double pencil_smallest_nontrivial(const Eigen::SparseMatrix<double>& K,
                                  const Eigen::SparseMatrix<double>& M, double sigma,
                                  Eigen::VectorXd* mode = nullptr) {
    const Eigen::Index n = K.rows();
    Eigen::SparseMatrix<double> A = K - sigma * M;
    A.makeCompressed();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("sparse LDLT failed on the shifted FEM pencil");

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd Mones = M * ones;
    const double onesM = ones.dot(Mones);
    auto deflate = [&](Eigen::VectorXd& v) { v -= (Mones.dot(v) / onesM) * ones; };

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
        y[i] = std::cos(0.001 * static_cast<double>(i)) + 1e-3 * static_cast<double>(i % 7);
    deflate(y);
    y /= std::sqrt(y.dot(M * y));

    double lambda = 0.0, prev = -1.0;
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXd z = ldlt.solve(M * y);
        deflate(z);
        const double nz = std::sqrt(z.dot(M * z));
        if (!(nz > 0.0))
            throw SolverError("FEM inverse iteration collapsed");
        y = z / nz;
        lambda = y.dot(K * y) / y.dot(M * y);
        if (std::abs(lambda - prev) <= 1e-12 * std::abs(lambda))
            break;
        prev = lambda;
    }
    if (mode)
        *mode = y;
    return lambda;
}

// 2D shifted p-quotient and gradient over nodal P1 values.
struct Quotient2D {
    const Fem2D& fem;
    double p;

    double shift(const Eigen::VectorXd& u) const {
        double lo = u.minCoeff(), hi = u.maxCoeff();
        if (!(hi - lo > 0.0))
            throw DegenerateError("2D optimal shift of a constant function");
        auto resid = [&](double t) {
            double acc = 0.0;
            std::size_t kq = 0;
            for (std::size_t e = 0; e < fem.mesh.triangles.size(); ++e) {
                const auto& tri = fem.mesh.triangles[e];
                const double uv[3] = {u[tri[0]], u[tri[1]], u[tri[2]]};
                static const double phi[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
                const Vec2 a = fem.mesh.points[static_cast<std::size_t>(tri[0])];
                const Vec2 b = fem.mesh.points[static_cast<std::size_t>(tri[1])];
                const Vec2 c = fem.mesh.points[static_cast<std::size_t>(tri[2])];
                const double aw = 0.5 * (b - a).cross(c - a) / 3.0;
                for (int k = 0; k < 3; ++k) {
                    const double uq = uv[0] * phi[0][k] + uv[1] * phi[1][k] + uv[2] * phi[2][k];
                    acc += aw * fem.wq[kq + static_cast<std::size_t>(k)] *
                           odd_pow(uq - t, p - 1.0);
                }
                kq += 3;
            }
            return acc;
        };
        double flo = resid(lo), fhi = resid(hi);
        if (flo <= 0.0)
            return lo;
        if (fhi >= 0.0)
            return hi;
        const double span = hi - lo;
        for (int it = 0; it < 60 && (hi - lo) > 1e-15 * span; ++it) {
            double mid = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(mid > lo && mid < hi) || it % 3 == 2)
                mid = 0.5 * (lo + hi);
            const double fm = resid(mid);
            if (fm > 0.0) {
                lo = mid;
                flo = fm;
                fhi *= 0.5;
            } else {
                hi = mid;
                fhi = fm;
                flo *= 0.5;
            }
        }
        return 0.5 * (lo + hi);
    }

    double value_grad(const Eigen::VectorXd& u, Eigen::VectorXd* grad) const {
        const double t = shift(u);
        double num = 0.0, den = 0.0;
        Eigen::VectorXd dnum, dden;
        if (grad) {
            dnum = Eigen::VectorXd::Zero(u.size());
            dden = Eigen::VectorXd::Zero(u.size());
        }
        std::size_t kq = 0;
        static const double phi[3][3] = {{0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
        for (std::size_t e = 0; e < fem.mesh.triangles.size(); ++e) {
            const auto& tri = fem.mesh.triangles[e];
            const auto& g = fem.grads[e];
            const Vec2 gu = g[0] * u[tri[0]] + g[1] * u[tri[1]] + g[2] * u[tri[2]];
            const double gnorm = gu.norm();
            num += std::pow(gnorm, p) * fem.wa[e];
            if (grad && gnorm > 0.0) {
                const double coef = p * std::pow(gnorm, p - 2.0) * fem.wa[e];
                for (int i = 0; i < 3; ++i)
                    dnum[tri[i]] += coef * gu.dot(g[static_cast<std::size_t>(i)]);
            }
            const Vec2 a = fem.mesh.points[static_cast<std::size_t>(tri[0])];
            const Vec2 b = fem.mesh.points[static_cast<std::size_t>(tri[1])];
            const Vec2 c = fem.mesh.points[static_cast<std::size_t>(tri[2])];
            const double aw = 0.5 * (b - a).cross(c - a) / 3.0;
            for (int k = 0; k < 3; ++k) {
                const double uq = u[tri[0]] * phi[0][k] + u[tri[1]] * phi[1][k] +
                                  u[tri[2]] * phi[2][k] - t;
                const double wk = aw * fem.wq[kq + static_cast<std::size_t>(k)];
                den += wk * std::pow(std::abs(uq), p);
                if (grad) {
                    const double dd = p * wk * odd_pow(uq, p - 1.0);
                    for (int i = 0; i < 3; ++i)
                        dden[tri[i]] += dd * phi[i][k];
                }
            }
            kq += 3;
        }
        if (!(den > 0.0))
            throw DegenerateError("2D quotient denominator vanished");
        const double J = num / den;
        if (grad)
            *grad = (dnum - J * dden) / den;
        return J;
    }
};

} // namespace

BoundCertificate make_certificate(std::string kind, double p, double scale,
                                  double computed_lambda, double rel_tol,
                                  std::string provenance) {
    BoundCertificate c;
    c.kind = std::move(kind);
    c.p = p;
    c.scale = scale;
    c.computed_lambda = computed_lambda;
    c.bound = std::pow(pi_p_closed(PExponent(p)) / scale, p);
    c.margin = c.computed_lambda - c.bound;
    c.rel_tol = rel_tol;
    c.pass = c.margin >= -rel_tol * c.bound;
    c.provenance = std::move(provenance);
    return c;
}

std::vector<BoundCertificate> verify_proposition(std::uint64_t seed_begin,
                                                 std::uint64_t seed_end,
                                                 const std::vector<double>& p_grid, double L,
                                                 double tol, double oracle_tol,
                                                 std::uint64_t oracle_stride) {
    std::vector<BoundCertificate> certs;
    for (std::uint64_t seed = seed_begin; seed < seed_end; ++seed) {
        for (double p : p_grid) {
            const std::string prov =
                "seed=" + std::to_string(seed) + " p=" + std::to_string(p) +
                " L=" + std::to_string(L);
            try {
                WeightFunction w = random_log_concave(seed, L);
                EigenProblem prob(w, PExponent(p));
                EigenResult r = first_nontrivial_eigenvalue(prob, 1e-8);
                BoundCertificate c =
                    make_certificate("proposition_1d", p, L, r.lambda, tol, prov);
                const bool run_oracle = (p == 2.0) || (oracle_stride > 0 &&
                                                       seed % oracle_stride == 0);
                if (run_oracle) {
                    MinimizeResult mr = minimize_quotient(w, PExponent(p), 2001, 1e-8, seed);
                    c.oracle_lambda = mr.lambda_h;
                    c.oracle_rel_tol = (p == 2.0) ? oracle_tol : 10.0 * oracle_tol;
                    if (std::abs(mr.lambda_h - r.lambda) > c.oracle_rel_tol * r.lambda)
                        c.pass = false;
                }
                certs.push_back(std::move(c));
            } catch (const Error& e) {
                BoundCertificate c;
                c.kind = "proposition_1d";
                c.p = p;
                c.scale = L;
                c.rel_tol = tol;
                c.pass = false;
                c.provenance = prov + " solver failure: " + e.what();
                certs.push_back(std::move(c));
            }
        }
    }
    return certs;
}

double fem_lambda_2d(const ConvexPolygon& poly, const Weight2D& w, PExponent pe,
                     double mesh_h, std::uint64_t seed) {
    const double p = pe.value();
    Fem2D fem(poly, w, mesh_h);
    const double d = diameter(poly);
    const double bound2 = std::pow(std::numbers::pi / d, 2.0); // p = 2 lower bound
    Eigen::VectorXd mode;
    const double lam2 = pencil_smallest_nontrivial(fem.K, fem.M, 0.9 * bound2, &mode);
    if (p == 2.0)
        return lam2;

    // p != 2: multi-start descent from the p = 2 mode, stepping along the H1
    // Riesz representative of the gradient for mesh-independent convergence.
    Eigen::SparseMatrix<double> A = fem.K + fem.M;
    A.makeCompressed();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> h1;
    h1.compute(A);
    if (h1.info() != Eigen::Success)
        throw SolverError("H1 metric factorization failed in the 2D descent");

    Quotient2D quot{fem, p};
    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
    const double umax = mode.cwiseAbs().maxCoeff();
    double best = std::numeric_limits<double>::infinity();
    for (int start = 0; start < 5; ++start) {
        Eigen::VectorXd u = mode;
        if (start > 0)
            for (Eigen::Index i = 0; i < u.size(); ++i)
                u[i] += 0.1 * umax * (2.0 * rng.u01() - 1.0);
        Eigen::VectorXd g(u.size());
        double J = quot.value_grad(u, &g);
        double step = 1.0;
        int slow_steps = 0;
        for (int it = 0; it < 300; ++it) {
            const Eigen::VectorXd dir = h1.solve(g);
            const double slope = g.dot(dir);
            if (!(slope > 0.0))
                break;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                Eigen::VectorXd trial = u - step * dir;
                const double Jt = quot.value_grad(trial, nullptr);
                if (Jt <= J - 1e-4 * step * slope) {
                    const double drop = (J - Jt) / J;
                    u = trial / trial.cwiseAbs().maxCoeff();
                    J = quot.value_grad(u, &g);
                    step *= 2.0;
                    accepted = true;
                    slow_steps = (drop < 1e-9) ? slow_steps + 1 : 0;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted || slow_steps >= 3)
                break;
        }
        best = std::min(best, J);
    }
    return best;
}

BoundCertificate verify_theorem_2d(const ConvexPolygon& poly, const Weight2D& w, PExponent pe,
                                   double mesh_h, double tol, std::string provenance) {
    const double d = diameter(poly);
    if (provenance.empty())
        provenance = "polygon n=" + std::to_string(poly.size()) +
                     " mesh_h=" + std::to_string(mesh_h);
    try {
        const double lam = fem_lambda_2d(poly, w, pe, mesh_h);
        BoundCertificate c =
            make_certificate("theorem_2d", pe.value(), d, lam, tol, std::move(provenance));
        return c;
    } catch (const Error& e) {
        BoundCertificate c;
        c.kind = "theorem_2d";
        c.p = pe.value();
        c.scale = d;
        c.rel_tol = tol;
        c.pass = false;
        c.provenance = provenance + " solver failure: " + e.what();
        return c;
    }
}

double zero_moment_shift(const ConvexPolygon& poly, const ScalarField& u, const Weight2D& w,
                         PExponent p) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec2& q : poly.vertices()) {
        lo = std::min(lo, u.value(q));
        hi = std::max(hi, u.value(q));
    }
    if (!(hi - lo > 0.0))
        throw DegenerateError("zero_moment_shift of a constant field");
    const double target = 1e-9 * std::max(absolute_moment(poly, u, w, p, 3), 1e-300);
    // the signed moment of u - c is strictly decreasing in c
    for (int it = 0; it < 120 && (hi - lo) > 1e-16 * (std::abs(hi) + std::abs(lo) + 1.0);
         ++it) {
        const double mid = 0.5 * (lo + hi);
        ScalarField shifted{[&](Vec2 q) { return u.value(q) - mid; }, u.gradient};
        (signed_moment_adaptive(poly, shifted, w, p, target) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SlicingReport verify_slicing_bound(const ConvexPolygon& poly, const ScalarField& u,
                                   const Weight2D& w, PExponent pe, double epsilon,
                                   double tol) {
    SlicingReport rep;
    rep.epsilon = epsilon;
    const double p = pe.value();
    const double d = diameter(poly);

    Decomposition dec = decompose(poly, u, w, pe, epsilon, tol);
    rep.slice_count = static_cast<int>(dec.slices.size());
    rep.moment_tol = dec.moment_tol;
    rep.all_pass = true;
    rep.min_margin = std::numeric_limits<double>::infinity();

    int idx = 0;
    for (const Slice& s : dec.slices) {
        rep.max_moment = std::max(rep.max_moment, std::abs(s.moment));
        const std::string prov = "slice=" + std::to_string(idx++) +
                                 " eps=" + std::to_string(epsilon) +
                                 " d_i=" + std::to_string(s.length);
        try {
            EigenProblem sp = reduce_to_1d(s, w, pe);
            EigenResult r = first_nontrivial_eigenvalue(sp, 1e-8);
            // certified against the global diameter (d_i <= d)
            BoundCertificate c = make_certificate("proposition_1d", p, d, r.lambda, 1e-6, prov);
            rep.min_margin = std::min(rep.min_margin, c.margin);
            rep.all_pass = rep.all_pass && c.pass;
            rep.certificates.push_back(std::move(c));
        } catch (const Error& e) {
            BoundCertificate c;
            c.kind = "proposition_1d";
            c.p = p;
            c.scale = d;
            c.rel_tol = 1e-6;
            c.pass = false;
            c.provenance = prov + " solver failure: " + e.what();
            rep.all_pass = false;
            rep.certificates.push_back(std::move(c));
        }
        if (u.gradient) {
            const ReductionResiduals rr = reduction_residuals(s, u, w, pe);
            rep.max_residual_rate = std::max(
                rep.max_residual_rate, (rr.r1 + rr.r2 + rr.r3) / s.polygon.area());
        }
    }
    return rep;
}

} // namespace wpw
