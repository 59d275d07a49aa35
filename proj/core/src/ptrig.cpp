#include "wpw/ptrig.hpp"
#include "wpw/errors.hpp"

#include <cmath>
#include <numbers>

namespace wpw {

PExponent::PExponent(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw DomainError("PExponent requires p > 1");
}

double pi_p_closed(PExponent pe) {
    const double p = pe.value();
    const double pi = std::numbers::pi;
    return 2.0 * pi * std::pow(p - 1.0, 1.0 / p) / (p * std::sin(pi / p));
}

QuadResult pi_p_quadrature_result(PExponent pe, double tol) {
    const double p = pe.value();
    if (!(tol > 0.0))
        throw DomainError("pi_p_quadrature requires tol > 0");
    const double pm1 = p - 1.0;

    auto head = [p, pm1](double s) { return 1.0 / (1.0 + std::pow(s, p) / pm1); };
    // Tail via s = 1/t: integrand (p-1) t^(p-2) / ((p-1) t^p + 1), integrable
    // at t = 0 for every p > 1 (blows up like t^(p-2) when p < 2).
    auto tail = [p, pm1](double t) {
        return pm1 * std::pow(t, p - 2.0) / (pm1 * std::pow(t, p) + 1.0);
    };

    QuadResult a = gk_adaptive(head, 0.0, 1.0, 0.25 * tol);
    QuadResult b = gk_adaptive(tail, 0.0, 1.0, 0.25 * tol);

    QuadResult out;
    out.value = 2.0 * (a.value + b.value);
    out.error = 2.0 * (a.error + b.error);
    out.intervals = a.intervals + b.intervals;
    out.converged = (out.error <= tol);
    return out;
}

double pi_p_quadrature(PExponent pe, double tol) {
    QuadResult r = pi_p_quadrature_result(pe, tol);
    if (!r.converged)
        throw QuadratureError("pi_p quadrature did not reach tolerance", r.error);
    return r.value;
}

} // namespace wpw
