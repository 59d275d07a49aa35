#include "wpw/weights.hpp"
#include "wpw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wpw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_length(double L) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw DomainError("WeightFunction requires interval length L > 0");
}

void check_in_domain(double x, double L) {
    if (!(x >= 0.0 && x <= L))
        throw DomainError("weight evaluated at x = " + std::to_string(x) +
                          " outside [0, " + std::to_string(L) + "]");
}

// splitmix64: tiny deterministic generator, stable across platforms.
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
    double uniform(double a, double b) { return a + (b - a) * u01(); }
    int index(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

} // namespace

WeightFunction WeightFunction::constant(double c, double L) {
    check_length(L);
    if (!(c > 0.0) || !std::isfinite(c))
        throw DomainError("Constant weight requires c > 0");
    WeightFunction w;
    w.node_ = ConstantP{c};
    w.L_ = L;
    return w;
}

WeightFunction WeightFunction::exponential(double kappa, double L) {
    check_length(L);
    if (!std::isfinite(kappa))
        throw DomainError("Exponential weight requires finite kappa");
    WeightFunction w;
    w.node_ = ExponentialP{kappa};
    w.L_ = L;
    return w;
}

WeightFunction WeightFunction::log_quadratic(double a, double m, double L) {
    check_length(L);
    if (!(a >= 0.0) || !std::isfinite(a) || !std::isfinite(m))
        throw DomainError("LogQuadratic weight requires a >= 0 and finite m");
    WeightFunction w;
    w.node_ = LogQuadraticP{a, m};
    w.L_ = L;
    return w;
}

WeightFunction WeightFunction::power(double alpha, double x0, double L) {
    check_length(L);
    if (!(alpha >= 0.0) || !std::isfinite(alpha) || !std::isfinite(x0))
        throw DomainError("Power weight requires alpha >= 0 and finite x0");
    WeightFunction w;
    w.node_ = PowerP{alpha, x0};
    w.L_ = L;
    return w;
}

WeightFunction WeightFunction::piecewise_log_linear(std::vector<double> breakpoints,
                                                    std::vector<double> logvalues) {
    if (breakpoints.size() < 2 || breakpoints.size() != logvalues.size())
        throw DomainError("PiecewiseLogLinear needs matching breakpoints/logvalues, at least 2");
    if (breakpoints.front() != 0.0)
        throw DomainError("PiecewiseLogLinear breakpoints must start at 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw DomainError("PiecewiseLogLinear breakpoints must be strictly ascending");
    for (double lv : logvalues)
        if (!std::isfinite(lv))
            throw DomainError("PiecewiseLogLinear logvalues must be finite");
    WeightFunction w;
    w.L_ = breakpoints.back();
    w.node_ = PiecewiseP{std::move(breakpoints), std::move(logvalues)};
    return w;
}

WeightFunction WeightFunction::product(std::vector<WeightFunction> factors) {
    if (factors.empty())
        throw DomainError("Product weight needs at least one factor");
    const double L = factors.front().length();
    for (const auto& f : factors)
        if (f.length() != L)
            throw DomainError("Product factors must share the same interval");
    WeightFunction w;
    w.L_ = L;
    w.node_ = ProductP{std::move(factors)};
    return w;
}

WeightFunction::Family WeightFunction::family() const {
    return static_cast<Family>(node_.index());
}

double WeightFunction::log_value(double x) const {
    check_in_domain(x, L_);
    struct Visitor {
        double x;
        double operator()(const ConstantP& p) const { return std::log(p.c); }
        double operator()(const ExponentialP& p) const { return p.kappa * x; }
        double operator()(const LogQuadraticP& p) const { return -p.a * (x - p.m) * (x - p.m); }
        double operator()(const PowerP& p) const {
            if (p.alpha == 0.0)
                return 0.0;
            return x > p.x0 ? p.alpha * std::log(x - p.x0) : kNegInf;
        }
        double operator()(const PiecewiseP& p) const {
            const auto& b = p.breakpoints;
            auto it = std::upper_bound(b.begin(), b.end(), x);
            std::size_t hi = static_cast<std::size_t>(it - b.begin());
            if (hi == b.size()) --hi;
            if (hi == 0) ++hi;
            const std::size_t lo = hi - 1;
            const double t = (x - b[lo]) / (b[hi] - b[lo]);
            return (1.0 - t) * p.logvalues[lo] + t * p.logvalues[hi];
        }
        double operator()(const ProductP& p) const {
            double sum = 0.0;
            for (const auto& f : p.factors)
                sum += f.log_value(x);
            return sum;
        }
    };
    return std::visit(Visitor{x}, node_);
}

double WeightFunction::evaluate(double x) const {
    check_in_domain(x, L_);
    struct Visitor {
        double x;
        double operator()(const ConstantP& p) const { return p.c; }
        double operator()(const ExponentialP& p) const { return std::exp(p.kappa * x); }
        double operator()(const LogQuadraticP& p) const {
            return std::exp(-p.a * (x - p.m) * (x - p.m));
        }
        double operator()(const PowerP& p) const {
            if (p.alpha == 0.0)
                return 1.0;
            return x > p.x0 ? std::pow(x - p.x0, p.alpha) : 0.0;
        }
        double operator()(const PiecewiseP&) const { return 0.0; } // handled below
        double operator()(const ProductP& p) const {
            double prod = 1.0;
            for (const auto& f : p.factors)
                prod *= f.evaluate(x);
            return prod;
        }
    };
    if (family() == Family::PiecewiseLogLinear)
        return std::exp(log_value(x));
    return std::visit(Visitor{x}, node_);
}

double WeightFunction::log_derivative(double x) const {
    check_in_domain(x, L_);
    struct Visitor {
        double x;
        double operator()(const ConstantP&) const { return 0.0; }
        double operator()(const ExponentialP& p) const { return p.kappa; }
        double operator()(const LogQuadraticP& p) const { return -2.0 * p.a * (x - p.m); }
        double operator()(const PowerP& p) const {
            if (p.alpha == 0.0)
                return 0.0;
            if (!(x > p.x0))
                throw SingularWeightError("log-derivative of a Power weight where f = 0");
            return p.alpha / (x - p.x0);
        }
        double operator()(const PiecewiseP& p) const {
            const auto& b = p.breakpoints;
            // right-hand slope at breakpoints; left-hand at the final one
            auto it = std::upper_bound(b.begin(), b.end(), x);
            std::size_t hi = static_cast<std::size_t>(it - b.begin());
            if (hi == b.size()) --hi;
            if (hi == 0) ++hi;
            const std::size_t lo = hi - 1;
            return (p.logvalues[hi] - p.logvalues[lo]) / (b[hi] - b[lo]);
        }
        double operator()(const ProductP& p) const {
            double sum = 0.0;
            for (const auto& f : p.factors)
                sum += f.log_derivative(x);
            return sum;
        }
    };
    return std::visit(Visitor{x}, node_);
}

WeightFunction WeightFunction::restricted(double L1) const {
    if (!(L1 > 0.0 && L1 <= L_))
        throw DomainError("restriction length must lie in (0, L]");
    struct Visitor {
        double L1;
        const WeightFunction& self;
        WeightFunction operator()(const ConstantP& p) const { return constant(p.c, L1); }
        WeightFunction operator()(const ExponentialP& p) const { return exponential(p.kappa, L1); }
        WeightFunction operator()(const LogQuadraticP& p) const {
            return log_quadratic(p.a, p.m, L1);
        }
        WeightFunction operator()(const PowerP& p) const { return power(p.alpha, p.x0, L1); }
        WeightFunction operator()(const PiecewiseP& p) const {
            std::vector<double> b, lv;
            for (std::size_t i = 0; i < p.breakpoints.size() && p.breakpoints[i] < L1; ++i) {
                b.push_back(p.breakpoints[i]);
                lv.push_back(p.logvalues[i]);
            }
            b.push_back(L1);
            lv.push_back(self.log_value(L1));
            return piecewise_log_linear(std::move(b), std::move(lv));
        }
        WeightFunction operator()(const ProductP& p) const {
            std::vector<WeightFunction> fs;
            fs.reserve(p.factors.size());
            for (const auto& f : p.factors)
                fs.push_back(f.restricted(L1));
            return product(std::move(fs));
        }
    };
    return std::visit(Visitor{L1, *this}, node_);
}

WeightFunction WeightFunction::scaled(double c) const {
    if (!(c > 0.0))
        throw DomainError("scaled requires c > 0");
    return product({constant(c, L_), *this});
}

bool validate_log_concavity(const WeightFunction& w, int grid_size, double tol) {
    if (grid_size < 3)
        throw DomainError("validate_log_concavity requires grid_size >= 3");
    const double L = w.length();
    const int n = grid_size;
    std::vector<double> lv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        lv[static_cast<std::size_t>(i)] = w.log_value(std::min(L, L * i / (n - 1.0)));
    for (int i = 0; i + 2 < n; ++i) {
        const double a = lv[static_cast<std::size_t>(i)];
        const double m = lv[static_cast<std::size_t>(i + 1)];
        const double b = lv[static_cast<std::size_t>(i + 2)];
        if (a == kNegInf || m == kNegInf || b == kNegInf)
            continue; // restricted to points where f > 0
        if (m < 0.5 * (a + b) - tol)
            return false;
    }
    return true;
}

bool positive_in_interior(const WeightFunction& w, int grid_size) {
    const double L = w.length();
    for (int i = 1; i + 1 < grid_size; ++i)
        if (!(w.evaluate(std::min(L, L * i / (grid_size - 1.0))) > 0.0))
            return false;
    return true;
}

namespace {

WeightFunction random_smooth_factor(SplitMix64& rng, double L) {
    switch (rng.index(2)) {
        case 0:
            return WeightFunction::exponential(rng.uniform(-10.0, 10.0), L);
        default:
            return WeightFunction::log_quadratic(rng.uniform(0.0, 20.0),
                                                 rng.uniform(-L, 2.0 * L), L);
    }
}

WeightFunction random_piecewise(SplitMix64& rng, double L) {
    const int nb = 3 + rng.index(6); // 3..8 breakpoints
    std::vector<double> b(static_cast<std::size_t>(nb));
    b.front() = 0.0;
    for (int i = 1; i < nb; ++i)
        b[static_cast<std::size_t>(i)] = rng.uniform(0.0, 1.0);
    std::sort(b.begin() + 1, b.end());
    // enforce strict ascent and rescale so the last breakpoint is L
    for (int i = 1; i < nb; ++i)
        b[static_cast<std::size_t>(i)] =
            std::max(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i - 1)] + 0.02);
    const double last = b.back();
    for (auto& x : b)
        x *= L / last;
    b.back() = L;

    std::vector<double> lv(static_cast<std::size_t>(nb));
    lv[0] = rng.uniform(-1.0, 1.0);
    double slope = rng.uniform(-8.0, 8.0);
    for (int i = 1; i < nb; ++i) {
        lv[static_cast<std::size_t>(i)] =
            lv[static_cast<std::size_t>(i - 1)] +
            slope * (b[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i - 1)]);
        slope -= rng.uniform(0.0, 4.0); // slopes drawn decreasing
    }
    return WeightFunction::piecewise_log_linear(std::move(b), std::move(lv));
}

} // namespace

WeightFunction random_log_concave(std::uint64_t seed, double L) {
    check_length(L);
    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    switch (rng.index(10)) {
        case 0:
            return WeightFunction::constant(rng.uniform(0.2, 5.0), L);
        case 1:
        case 2:
            return WeightFunction::exponential(rng.uniform(-10.0, 10.0), L);
        case 3:
        case 4:
            return WeightFunction::log_quadratic(rng.uniform(0.0, 20.0),
                                                 rng.uniform(-L, 2.0 * L), L);
        case 5: {
            const double alpha = rng.uniform(0.0, 4.0);
            const double x0 = rng.u01() < 0.5 ? 0.0 : rng.uniform(-L, 0.0);
            return WeightFunction::power(alpha, x0, L);
        }
        case 6:
        case 7:
            return random_piecewise(rng, L);
        default: {
            std::vector<WeightFunction> fs;
            const int k = 2 + rng.index(2);
            for (int i = 0; i < k; ++i)
                fs.push_back(random_smooth_factor(rng, L));
            return WeightFunction::product(std::move(fs));
        }
    }
}

WeightFunction random_smooth_log_concave(std::uint64_t seed, double L) {
    check_length(L);
    SplitMix64 rng(seed * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL);
    switch (rng.index(6)) {
        case 0:
            return WeightFunction::constant(rng.uniform(0.2, 5.0), L);
        case 1:
        case 2:
            return WeightFunction::exponential(rng.uniform(-10.0, 10.0), L);
        case 3:
        case 4:
            return WeightFunction::log_quadratic(rng.uniform(0.0, 20.0),
                                                 rng.uniform(-L, 2.0 * L), L);
        default: {
            std::vector<WeightFunction> fs;
            const int k = 2 + rng.index(2);
            for (int i = 0; i < k; ++i)
                fs.push_back(random_smooth_factor(rng, L));
            return WeightFunction::product(std::move(fs));
        }
    }
}

} // namespace wpw
