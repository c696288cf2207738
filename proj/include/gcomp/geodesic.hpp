#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gcomp/errors.hpp"
#include "gcomp/ode.hpp"
#include "gcomp/warping.hpp"

namespace gcomp {

inline constexpr double kPi = 3.14159265358979323846;

struct ModelPoint {
    double x = 0.0; // height, >= 0
    double y = 0.0; // coordinate along the boundary direction
};

/// Position plus launch direction. `angle` is measured in [0, pi] against
/// +d/dx, so the unit tangent is (cos(angle), sin(angle)/m(x)) and the
/// y-coordinate is nondecreasing along the state's geodesic. Directions
/// with decreasing y are handled through the y -> -y reflection isometry.
struct GeodesicState {
    ModelPoint point;
    double angle = 0.0;
};

struct PathSample {
    double s;      // arc length
    double x, y;   // position
    double xp, yp; // coordinate velocities
};

struct GeodesicPath {
    std::vector<PathSample> samples;
    double total_length = 0.0;
    double clairaut = 0.0; // nu >= 0
    bool truncated = false; // stopped at a boundary crossing

    const PathSample& front() const { return samples.front(); }
    const PathSample& back() const { return samples.back(); }

    GeodesicState state(std::size_t i, const WarpingFunction& w) const {
        const auto& p = samples.at(i);
        const double sy = w.m(p.x) * std::abs(p.yp);
        return GeodesicState{{p.x, p.y}, std::atan2(sy, p.xp)};
    }
    GeodesicState endpoint(const WarpingFunction& w) const {
        return state(samples.size() - 1, w);
    }
};

/// Clairaut constant nu = m(x) sin(angle); zero exactly for boundary-ray
/// directions.
inline double clairaut_constant(const WarpingFunction& w, const GeodesicState& s) {
    return w.m(s.point.x) * std::sin(s.angle);
}

namespace detail {

struct GeodesicRhs {
    const WarpingFunction* w;
    // state: [x, y, x', y']
    void operator()(double, const std::array<double, 4>& u, std::array<double, 4>& du) const {
        const double m = w->m(u[0]);
        const double dm = w->dm(u[0]);
        du[0] = u[2];
        du[1] = u[3];
        du[2] = m * dm * u[3] * u[3];
        du[3] = -2.0 * (dm / m) * u[2] * u[3];
    }
};

inline std::array<double, 4> initial_state(const WarpingFunction& w, const GeodesicState& init) {
    const double m = w.m(init.point.x);
    return {init.point.x, init.point.y, std::cos(init.angle), std::sin(init.angle) / m};
}

enum class ShotStop { length, boundary, domain_max, y_target, failed };

struct ShotResult {
    ShotStop stop = ShotStop::failed;
    double s = 0.0;
    std::array<double, 4> u{};
};

/// Core shot: integrate the geodesic system from `u0` until arc length
/// `s_end`, a boundary crossing (x < -1e-12), the numerical ceiling
/// x > domain_max, or (when y_target is set) y reaching y_target.
template <class StepCb>
inline ShotResult shoot(const WarpingFunction& w, std::array<double, 4> u0, double s_end,
                        std::optional<double> y_target, const OdeOptions& opt, StepCb&& cb) {
    GeodesicRhs rhs{&w};
    const double dmax = w.domain_max();
    ShotResult res;
    if (y_target) {
        const double yt = *y_target;
        auto ev = [&](double, const std::array<double, 4>& u, std::array<double, 3>& g) {
            g[0] = u[0] + 1e-12;
            g[1] = dmax - u[0];
            g[2] = yt - u[1];
        };
        auto r = integrate_ode<4, 3>(rhs, 0.0, u0, s_end, opt, ev, cb);
        res.s = r.s;
        res.u = r.y;
        if (r.status == OdeStatus::event)
            res.stop = r.event_index == 0   ? ShotStop::boundary
                       : r.event_index == 1 ? ShotStop::domain_max
                                            : ShotStop::y_target;
        else if (r.status == OdeStatus::reached_end)
            res.stop = ShotStop::length;
        else
            res.stop = ShotStop::failed;
    } else {
        auto ev = [&](double, const std::array<double, 4>& u, std::array<double, 2>& g) {
            g[0] = u[0] + 1e-12;
            g[1] = dmax - u[0];
        };
        auto r = integrate_ode<4, 2>(rhs, 0.0, u0, s_end, opt, ev, cb);
        res.s = r.s;
        res.u = r.y;
        if (r.status == OdeStatus::event)
            res.stop = r.event_index == 0 ? ShotStop::boundary : ShotStop::domain_max;
        else if (r.status == OdeStatus::reached_end)
            res.stop = ShotStop::length;
        else
            res.stop = ShotStop::failed;
    }
    return res;
}

} // namespace detail

/// Trace a unit-speed geodesic of the given length from `init`.
/// The Clairaut relation and the first-order form of the geodesic equation
/// are conserved quantities of the integrated second-order system and are
/// asserted by the tests, not enforced here.
///
/// Throws TruncationError if the path climbs past domain_max and
/// IntegrationError on step failure; a boundary exit stops the path at the
/// crossing and flags it truncated.
inline GeodesicPath integrate_geodesic(const WarpingFunction& w, const GeodesicState& init,
                                       double length, const OdeOptions& opt = {}) {
    if (!(length > 0)) throw std::invalid_argument("integrate_geodesic: length must be positive");
    GeodesicPath path;
    path.clairaut = clairaut_constant(w, init);
    auto cb = [&](double s, const std::array<double, 4>& u) {
        path.samples.push_back({s, u[0], u[1], u[2], u[3]});
    };
    // traced paths get a tighter tolerance than the shooting scans: the
    // conserved-quantity drift accumulates at roughly steps * rtol
    OdeOptions tight = opt;
    tight.rtol = std::min(opt.rtol, 1e-13);
    tight.atol = std::min(opt.atol, 1e-15);
    auto r = detail::shoot(w, detail::initial_state(w, init), length, std::nullopt, tight, cb);
    switch (r.stop) {
        case detail::ShotStop::length:
            break;
        case detail::ShotStop::boundary:
            path.truncated = true;
            if (!path.samples.empty() && path.samples.back().x < 0) path.samples.back().x = 0.0;
            break;
        case detail::ShotStop::domain_max:
            throw TruncationError("geodesic left the truncated domain (x > domain_max)");
        default:
            throw IntegrationError("geodesic integration failed (step underflow)");
    }
    path.total_length = r.s;
    return path;
}

namespace detail {

template <class F>
inline double improper_integral(F&& f, double lo, double hi) {
    if (hi <= lo) return 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0, l1 = 0;
    const double v = integrator.integrate(std::forward<F>(f), lo, hi, 1e-10, &err, &l1);
    if (!std::isfinite(v)) throw QuadratureError("non-integrable singularity");
    return v;
}

inline void check_branch(const WarpingFunction& w, double nu, double lo, double hi) {
    const int n = 512;
    for (int i = 1; i < n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        if (!(w.m(t) > nu))
            throw BranchError("turning point inside quadrature range (m <= nu)");
    }
}

} // namespace detail

/// Arc length of the monotone geodesic branch between heights x1 and x2,
/// integral of m / sqrt(m^2 - nu^2). Endpoint turning points (m = nu at an
/// endpoint) are integrable and handled by the double-exponential rule.
inline double quadrature_length(const WarpingFunction& w, double nu, double x1, double x2) {
    const double lo = std::min(x1, x2), hi = std::max(x1, x2);
    if (lo < 0 || hi > w.domain_max())
        throw std::domain_error("quadrature_length: heights outside [0, domain_max]");
    if (hi == lo) return 0.0;
    detail::check_branch(w, nu, lo, hi);
    return detail::improper_integral(
        [&](double t) {
            const double m = w.m(t);
            const double rad = std::max(m * m - nu * nu, 1e-300);
            return m / std::sqrt(rad);
        },
        lo, hi);
}

/// Lower bound for the length of any geodesic with Clairaut constant nu
/// whose height runs from t1 to t2:
///   t2 - t1 + (nu^2 / 2) * integral dt / (m sqrt(m^2 - nu^2)).
inline double length_lower_bound(const WarpingFunction& w, double nu, double t1, double t2) {
    if (t2 < t1) throw std::invalid_argument("length_lower_bound: requires t2 >= t1");
    if (t2 == t1) return 0.0;
    if (nu == 0.0) return t2 - t1;
    const double corr = detail::improper_integral(
        [&](double t) {
            const double m = w.m(t);
            const double rad = std::max(m * m - nu * nu, 1e-300);
            return 1.0 / (m * std::sqrt(rad));
        },
        t1, t2);
    return t2 - t1 + 0.5 * nu * nu * corr;
}

} // namespace gcomp
