#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "gcomp/errors.hpp"

namespace gcomp {

enum class OdeStatus { reached_end, event, step_underflow, max_steps };

template <std::size_t N>
struct OdeResult {
    OdeStatus status = OdeStatus::reached_end;
    int event_index = -1;
    double s = 0.0;
    std::array<double, N> y{};
    std::size_t n_steps = 0;
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_max = 0.5;
    std::size_t max_steps = 2'000'000;
};

namespace detail {

// Dormand-Prince 5(4) pair.
template <std::size_t N, class RHS>
inline void dopri_step(RHS&& f, double s, const std::array<double, N>& y, double h,
                       std::array<double, N>& y5, std::array<double, N>& err) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    std::array<double, N> k1, k2, k3, k4, k5, k6, k7, tmp;
    f(s, y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (1.0 / 5 * k1[i]);
    f(s + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (3.0 / 40 * k1[i] + 9.0 / 40 * k2[i]);
    f(s + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
    f(s + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] +
                             64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
    f(s + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] +
                             46732.0 / 5247 * k3[i] + 49.0 / 176 * k4[i] -
                             5103.0 / 18656 * k5[i]);
    f(s + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                            2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
    f(s + h, y5, k7);
    for (std::size_t i = 0; i < N; ++i) {
        const double y4 = y[i] + h * (5179.0 / 57600 * k1[i] + 7571.0 / 16695 * k3[i] +
                                      393.0 / 640 * k4[i] - 92097.0 / 339200 * k5[i] +
                                      187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
        err[i] = y5[i] - y4;
    }
}

} // namespace detail

/// Adaptive Dormand-Prince 5(4) driver.
///
/// `events(s, y, g)` fills M event values; integration stops at the first
/// crossing g_j: >0 -> <=0, located by re-stepping from the step start.
/// `on_step(s, y)` is invoked for the initial state and every accepted step.
template <std::size_t N, std::size_t M, class RHS, class Events, class StepCb>
OdeResult<N> integrate_ode(RHS&& f, double s0, std::array<double, N> y0, double s_end,
                           const OdeOptions& opt, Events&& events, StepCb&& on_step) {
    OdeResult<N> out;
    double s = s0;
    std::array<double, N> y = y0;
    on_step(s, y);

    std::array<double, M> g0{}, g1{};
    events(s, y, g0);

    double h = std::min(opt.h_init, std::max(1e-12, s_end - s0));
    std::array<double, N> ynew, err;
    const double span = s_end - s0;

    while (s < s_end) {
        if (out.n_steps++ > opt.max_steps) {
            out.status = OdeStatus::max_steps;
            out.s = s;
            out.y = y;
            return out;
        }
        h = std::min(h, s_end - s);
        if (h < 1e-14 * std::max(1.0, std::abs(s)) && s + h < s_end) {
            out.status = OdeStatus::step_underflow;
            out.s = s;
            out.y = y;
            return out;
        }
        detail::dopri_step(f, s, y, h, ynew, err);
        double enorm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = err[i] / sc;
            enorm += e * e;
        }
        enorm = std::sqrt(enorm / N);
        if (!(enorm <= 1.0) && h > 1e-14 * std::max(1.0, std::abs(s))) {
            const double fac = std::clamp(0.9 * std::pow(std::max(enorm, 1e-30), -0.2), 0.2, 5.0);
            h *= fac;
            continue;
        }
        // accepted
        events(s + h, ynew, g1);
        int crossed = -1;
        double cross_h = h;
        {
            // locate every crossing within [0, h] by bisection on the step
            // size and keep the earliest one
            std::array<double, N> ymid;
            std::array<double, M> gm{};
            for (std::size_t j = 0; j < M; ++j) {
                if (!(g0[j] > 0.0 && g1[j] <= 0.0)) continue;
                double lo = 0.0, hi = h;
                for (int it = 0; it < 80 && (hi - lo) > 1e-15 * std::max(1.0, h); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    detail::dopri_step(f, s, y, mid, ymid, err);
                    events(s + mid, ymid, gm);
                    if (gm[j] > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                if (hi < cross_h || crossed < 0) {
                    cross_h = hi;
                    crossed = static_cast<int>(j);
                }
            }
        }
        if (crossed >= 0) {
            detail::dopri_step(f, s, y, cross_h, ynew, err);
            s += cross_h;
            y = ynew;
            on_step(s, y);
            out.status = OdeStatus::event;
            out.event_index = crossed;
            out.s = s;
            out.y = y;
            return out;
        }
        s += h;
        y = ynew;
        g0 = g1;
        on_step(s, y);
        const double fac = std::clamp(0.9 * std::pow(std::max(enorm, 1e-30), -0.2), 0.2, 5.0);
        h = std::min(h * fac, opt.h_max * std::max(1.0, std::abs(span)));
    }
    out.status = OdeStatus::reached_end;
    out.s = s;
    out.y = y;
    return out;
}

struct NoEvents {
    template <std::size_t N>
    void operator()(double, const std::array<double, N>&, std::array<double, 0>&) const {}
};
struct NoStepCb {
    template <std::size_t N>
    void operator()(double, const std::array<double, N>&) const {}
};

} // namespace gcomp
