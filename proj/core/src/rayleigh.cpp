#include "wpw/rayleigh.hpp"
#include "wpw/errors.hpp"
#include "wpw/quadrature.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

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

// Weight samples at the per-cell Gauss nodes, computed once per mesh.
struct CellQuadCache {
    std::vector<double> xq, fq, wq; // flattened cells x 8; wq includes h/2
    std::vector<double> F;          // Int_cell f
    std::vector<double> h;
    int cells = 0;

    CellQuadCache(const std::vector<double>& nodes, const WeightFunction& w) {
        cells = static_cast<int>(nodes.size()) - 1;
        const auto nq = static_cast<std::size_t>(cells) * 8;
        xq.resize(nq);
        fq.resize(nq);
        wq.resize(nq);
        F.assign(static_cast<std::size_t>(cells), 0.0);
        h.resize(static_cast<std::size_t>(cells));
        for (int c = 0; c < cells; ++c) {
            const auto sc = static_cast<std::size_t>(c);
            const double a = nodes[sc], b = nodes[sc + 1];
            h[sc] = b - a;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int g = 0; g < 8; ++g) {
                const std::size_t k = sc * 8 + static_cast<std::size_t>(g);
                xq[k] = mid + half * kGauss8Nodes[g];
                fq[k] = w.evaluate(std::clamp(xq[k], 0.0, w.length()));
                wq[k] = half * kGauss8Weights[g];
                F[sc] += wq[k] * fq[k];
            }
        }
    }
};

// u at a quadrature node of cell c (linear on the cell).
inline double u_node(const DiscreteFunction& u, const CellQuadCache& q, std::size_t c, int g) {
    const std::size_t k = c * 8 + static_cast<std::size_t>(g);
    const double t = (q.xq[k] - u.nodes[c]) / q.h[c];
    return (1.0 - t) * u.values[c] + t * u.values[c + 1];
}

double shift_residual(const DiscreteFunction& u, const CellQuadCache& q, double pm1,
                      double t_shift) {
    double acc = 0.0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(q.cells); ++c)
        for (int g = 0; g < 8; ++g) {
            const std::size_t k = c * 8 + static_cast<std::size_t>(g);
            acc += q.wq[k] * q.fq[k] * odd_pow(u_node(u, q, c, g) - t_shift, pm1);
        }
    return acc;
}

double optimal_shift_cached(const DiscreteFunction& u, const CellQuadCache& q, double p,
                            const double* hint = nullptr) {
    double lo = *std::min_element(u.values.begin(), u.values.end());
    double hi = *std::max_element(u.values.begin(), u.values.end());
    if (!(hi - lo > 0.0))
        throw DegenerateError("optimal_shift of a constant function");
    const double pm1 = p - 1.0;
    const double span0 = hi - lo;
    // residual is strictly decreasing in t: positive at min u, negative at max u
    double flo, fhi;
    if (hint && *hint > lo && *hint < hi) {
        // expand a bracket around the previous shift
        double r = 1e-3 * span0;
        double a = *hint, b = *hint;
        double fa = shift_residual(u, q, pm1, a), fb = fa;
        for (int k = 0; k < 12 && fa * fb >= 0.0; ++k) {
            a = std::max(lo, *hint - r);
            b = std::min(hi, *hint + r);
            fa = shift_residual(u, q, pm1, a);
            fb = shift_residual(u, q, pm1, b);
            r *= 4.0;
        }
        if (fa > 0.0 && fb < 0.0) {
            lo = a;
            hi = b;
            flo = fa;
            fhi = fb;
        } else {
            flo = shift_residual(u, q, pm1, lo);
            fhi = shift_residual(u, q, pm1, hi);
        }
    } else {
        flo = shift_residual(u, q, pm1, lo);
        fhi = shift_residual(u, q, pm1, hi);
    }
    if (flo <= 0.0)
        return lo;
    if (fhi >= 0.0)
        return hi;
    for (int it = 0; it < 60 && (hi - lo) > 1e-15 * span0; ++it) {
        double mid = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(mid > lo && mid < hi) || it % 3 == 2)
            mid = 0.5 * (lo + hi);
        const double fm = shift_residual(u, q, pm1, mid);
        if (fm > 0.0) {
            lo = mid;
            flo = fm;
            fhi *= 0.5; // Illinois damping against one-sided stalls
        } else {
            hi = mid;
            fhi = fm;
            flo *= 0.5;
        }
    }
    return 0.5 * (lo + hi);
}

struct QuotientParts {
    double num = 0.0, den = 0.0, shift = 0.0;
};

QuotientParts quotient_parts(const DiscreteFunction& u, const CellQuadCache& q, double p,
                             const double* shift_hint = nullptr) {
    QuotientParts out;
    out.shift = optimal_shift_cached(u, q, p, shift_hint);
    for (std::size_t c = 0; c < static_cast<std::size_t>(q.cells); ++c) {
        const double s = (u.values[c + 1] - u.values[c]) / q.h[c];
        out.num += std::pow(std::abs(s), p) * q.F[c];
        for (int g = 0; g < 8; ++g) {
            const std::size_t k = c * 8 + static_cast<std::size_t>(g);
            out.den += q.wq[k] * q.fq[k] * std::pow(std::abs(u_node(u, q, c, g) - out.shift), p);
        }
    }
    if (!(out.den > 0.0))
        throw DegenerateError("quotient denominator vanished");
    return out;
}

QuotientGradient quotient_gradient_cached(const DiscreteFunction& u, const CellQuadCache& q,
                                          double p, const double* shift_hint = nullptr) {
    const QuotientParts parts = quotient_parts(u, q, p, shift_hint);
    const std::size_t n = u.values.size();
    std::vector<double> dnum(n, 0.0), dden(n, 0.0);

    for (std::size_t c = 0; c < static_cast<std::size_t>(q.cells); ++c) {
        const double hc = q.h[c];
        const double s = (u.values[c + 1] - u.values[c]) / hc;
        const double dnum_ds = p * odd_pow(s, p - 1.0) * q.F[c];
        dnum[c] -= dnum_ds / hc;
        dnum[c + 1] += dnum_ds / hc;
        for (int g = 0; g < 8; ++g) {
            const std::size_t k = c * 8 + static_cast<std::size_t>(g);
            const double t = (q.xq[k] - u.nodes[c]) / hc;
            const double dd =
                p * q.wq[k] * q.fq[k] * odd_pow(u_node(u, q, c, g) - parts.shift, p - 1.0);
            dden[c] += dd * (1.0 - t);
            dden[c + 1] += dd * t;
        }
    }

    QuotientGradient out;
    out.value = parts.num / parts.den;
    out.grad.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.grad[i] = (dnum[i] * parts.den - parts.num * dden[i]) / (parts.den * parts.den);
    return out;
}

} // namespace

DiscreteFunction::DiscreteFunction(std::vector<double> nodes_, std::vector<double> values_)
    : nodes(std::move(nodes_)), values(std::move(values_)) {
    if (nodes.size() < 3 || nodes.size() != values.size())
        throw DomainError("DiscreteFunction needs >= 3 nodes and matching values");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw DomainError("DiscreteFunction nodes must be strictly ascending");
}

DiscreteFunction DiscreteFunction::uniform(double L, int n_nodes, std::vector<double> values) {
    std::vector<double> nodes(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i)
        nodes[static_cast<std::size_t>(i)] = std::min(L, L * i / (n_nodes - 1.0));
    return DiscreteFunction(std::move(nodes), std::move(values));
}

double optimal_shift(const DiscreteFunction& u, const WeightFunction& w, PExponent p) {
    CellQuadCache q(u.nodes, w);
    return optimal_shift_cached(u, q, p.value());
}

double quotient(const DiscreteFunction& u, const WeightFunction& w, PExponent p) {
    CellQuadCache q(u.nodes, w);
    const QuotientParts parts = quotient_parts(u, q, p.value());
    return parts.num / parts.den;
}

QuotientGradient quotient_with_gradient(const DiscreteFunction& u, const WeightFunction& w,
                                        PExponent p) {
    CellQuadCache q(u.nodes, w);
    return quotient_gradient_cached(u, q, p.value());
}

namespace {

using Sp = Eigen::SparseMatrix<double>;

// stiffness and weighted-mass matrices of the P1 discretization
std::pair<Sp, Sp> assemble_pencil(const CellQuadCache& q, int n) {
    std::vector<Eigen::Triplet<double>> tk, tm;
    tk.reserve(static_cast<std::size_t>(n) * 4);
    tm.reserve(static_cast<std::size_t>(n) * 4);
    for (int c = 0; c < n - 1; ++c) {
        const auto sc = static_cast<std::size_t>(c);
        const double hc = q.h[sc];
        const double k = q.F[sc] / (hc * hc);
        double m11 = 0, m12 = 0, m22 = 0;
        for (int g = 0; g < 8; ++g) {
            const std::size_t kk = sc * 8 + static_cast<std::size_t>(g);
            const double t = 0.5 * (1.0 + kGauss8Nodes[g]); // barycentric on the cell
            const double wf = q.wq[kk] * q.fq[kk];
            m11 += wf * (1.0 - t) * (1.0 - t);
            m12 += wf * (1.0 - t) * t;
            m22 += wf * t * t;
        }
        tk.emplace_back(c, c, k);
        tk.emplace_back(c + 1, c + 1, k);
        tk.emplace_back(c, c + 1, -k);
        tk.emplace_back(c + 1, c, -k);
        tm.emplace_back(c, c, m11);
        tm.emplace_back(c + 1, c + 1, m22);
        tm.emplace_back(c, c + 1, m12);
        tm.emplace_back(c + 1, c, m12);
    }
    Sp K(n, n), M(n, n);
    K.setFromTriplets(tk.begin(), tk.end());
    M.setFromTriplets(tm.begin(), tm.end());
    return {std::move(K), std::move(M)};
}

// p = 2 path: shift-inverted inverse iteration for the (stiffness, weighted
// mass) pencil with the weighted-constant mode deflated.
MinimizeResult solve_p2(const WeightFunction& w, int n, const CellQuadCache& q) {
    const double L = w.length();
    auto [K, M] = assemble_pencil(q, n);

    // lambda_1 >= (pi/L)^2 for certified weights, so this shift separates the
    // trivial mode from the target.
    const double sigma = 0.9 * std::pow(std::numbers::pi / L, 2.0);
    Sp A = K - sigma * M;
    A.makeCompressed();
    Eigen::SparseLU<Sp> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse factorization failed in the p = 2 oracle");

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd Mones = M * ones;
    const double onesM = ones.dot(Mones);
    auto deflate = [&](Eigen::VectorXd& v) { v -= (Mones.dot(v) / onesM) * ones; };

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i)
        y[i] = std::cos(std::numbers::pi * i / (n - 1.0)); // rough first-mode shape
    deflate(y);
    y /= std::sqrt(y.dot(M * y));

    double lambda = 0.0, lambda_prev = -1.0;
    int it = 0;
    for (; it < 500; ++it) {
        Eigen::VectorXd z = lu.solve(M * y);
        deflate(z);
        const double nz = std::sqrt(z.dot(M * z));
        if (!(nz > 0.0))
            throw SolverError("inverse iteration collapsed onto the deflated mode");
        y = z / nz;
        lambda = y.dot(K * y) / y.dot(M * y);
        if (std::abs(lambda - lambda_prev) <= 1e-12 * std::abs(lambda))
            break;
        lambda_prev = lambda;
    }

    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] = y[i];
    return MinimizeResult{lambda, DiscreteFunction::uniform(L, n, std::move(vals)),
                          it < 500, it};
}

} // namespace

MinimizeResult minimize_quotient(const WeightFunction& w, PExponent pe, int n_nodes,
                                 double tol, std::uint64_t seed) {
    if (n_nodes < 17)
        throw DomainError("minimize_quotient requires n_nodes >= 17");
    if (!(tol > 0.0))
        throw DomainError("minimize_quotient requires tol > 0");

    const double p = pe.value();
    std::vector<double> nodes(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i)
        nodes[static_cast<std::size_t>(i)] = std::min(w.length(), w.length() * i / (n_nodes - 1.0));
    CellQuadCache q(nodes, w);

    MinimizeResult base = solve_p2(w, n_nodes, q);
    if (p == 2.0)
        return base;

    // p != 2: multi-start descent seeded from the p = 2 minimizer. The raw
    // nodal gradient scales like 1/h^2 across the mesh, so the step is taken
    // along its H1 Riesz representative (K + M solve); this keeps the
    // iteration count mesh-independent.
    auto [K, M] = assemble_pencil(q, n_nodes);
    Sp A = K + M;
    A.makeCompressed();
    Eigen::SparseLU<Sp> h1;
    h1.compute(A);
    if (h1.info() != Eigen::Success)
        throw SolverError("H1 metric factorization failed in the descent oracle");

    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 0xda3e39cb94b95bdbULL);
    double umax = 0.0;
    for (double v : base.u.values)
        umax = std::max(umax, std::abs(v));

    MinimizeResult best{std::numeric_limits<double>::infinity(), base.u, false, 0};
    const auto n = static_cast<Eigen::Index>(n_nodes);

    for (int start = 0; start < 5; ++start) {
        DiscreteFunction u = base.u;
        if (start > 0)
            for (auto& v : u.values)
                v += 0.1 * umax * (2.0 * rng.u01() - 1.0);

        QuotientGradient g = quotient_gradient_cached(u, q, p);
        double shift_hint = 0.0;
        bool converged = false;
        int it = 0;
        int slow_steps = 0;
        double step = 1.0;
        DiscreteFunction trial = u;
        for (; it < 300 && !converged; ++it) {
            Eigen::Map<const Eigen::VectorXd> gv(g.grad.data(), n);
            Eigen::VectorXd dir = h1.solve(gv);
            const double slope = gv.dot(dir); // descent rate along -dir, >= 0
            if (!(slope > 0.0))
                break;
            bool accepted = false;
            for (int bt = 0; bt < 50; ++bt) {
                for (std::size_t i = 0; i < u.values.size(); ++i)
                    trial.values[i] = u.values[i] - step * dir[static_cast<Eigen::Index>(i)];
                const QuotientParts parts = quotient_parts(trial, q, p, &shift_hint);
                const double Jt = parts.num / parts.den;
                if (Jt <= g.value - 1e-4 * step * slope) {
                    const double drop = (g.value - Jt) / g.value;
                    // re-shift and rescale the accepted iterate
                    double tmax = 0.0;
                    for (auto& v : trial.values)
                        tmax = std::max(tmax, std::abs(v - parts.shift));
                    for (auto& v : trial.values)
                        v = (v - parts.shift) / tmax;
                    u = trial;
                    shift_hint = 0.0; // iterate is re-centered
                    g = quotient_gradient_cached(u, q, p, &shift_hint);
                    step *= 2.0;
                    accepted = true;
                    slow_steps = (drop < tol * 1e-2) ? slow_steps + 1 : 0;
                    if (slow_steps >= 3)
                        converged = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                converged = true; // line search exhausted: stationary within rounding
                break;
            }
        }
        if (g.value < best.lambda_h) {
            best.lambda_h = g.value;
            best.u = u;
            best.converged = converged;
            best.iterations = it;
        }
    }
    return best;
}

} // namespace wpw
