#pragma once

#include "wpw/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wpw::ode {

template <int N>
using State = std::array<double, N>;

/// Adaptive embedded Dormand-Prince 5(4) integrator.
///
/// rhs(t, y, dydt) fills the derivative; observer(t, y) is called at the
/// initial point and after every accepted step. Step size is controlled to
/// keep the RMS of e_i / (atol_i + rtol * |y_i|) at or below 1. Throws
/// StiffnessError on step underflow or when the step budget is exhausted.
template <int N, class RHS, class Observer>
void integrate_adaptive(RHS&& rhs, State<N>& y, double a, double b,
                        double rtol, const State<N>& atol, Observer&& observer,
                        double h_init = 0.0, double h_max = 0.0,
                        long max_steps = 4000000L) {
    static_assert(N >= 1);
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // difference between the 5th and the embedded 4th order weights
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = b - a;
    if (span == 0.0) {
        observer(a, y);
        return;
    }
    const double hmin = std::abs(span) * 1e-15;
    const double hcap = (h_max > 0.0) ? h_max : std::abs(span);
    double h = (h_init > 0.0) ? std::min(h_init, std::abs(span)) : std::abs(span) / 256.0;
    h = std::min(h, hcap);
    double t = a;

    State<N> k1, k2, k3, k4, k5, k6, k7, yt, ynew, err;
    rhs(t, y, k1);
    observer(t, y);

    long steps = 0;
    bool last = false;
    while (!last) {
        if (++steps > max_steps)
            throw StiffnessError("adaptive RK step budget exhausted", t);
        if (h < hmin)
            throw StiffnessError("adaptive RK step underflow", t);
        if (t + h >= b) {
            h = b - t;
            last = true;
        }

        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, yt, k2);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, yt, k3);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, yt, k4);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, yt, k5);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        rhs(t + h, yt, k6);
        for (int i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double errnorm = 0.0;
        for (int i = 0; i < N; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
            const double sc = atol[i] + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = err[i] / sc;
            errnorm += r * r;
        }
        errnorm = std::sqrt(errnorm / N);
        if (!std::isfinite(errnorm)) {
            h *= 0.2;
            last = false;
            continue;
        }

        if (errnorm <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7; // FSAL
            observer(t, y);
            const double grow = (errnorm == 0.0)
                                    ? 5.0
                                    : std::min(5.0, 0.9 * std::pow(errnorm, -0.2));
            h = std::min(h * std::max(0.2, grow), hcap);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
            last = false;
        }
    }
}

} // namespace wpw::ode
