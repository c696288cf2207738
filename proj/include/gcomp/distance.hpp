#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "gcomp/geodesic.hpp"

namespace gcomp {

struct ShootingOptions {
    int n_brackets = 720;
    double angle_tol = 1e-12;
    double tie_tol = 1e-6; // minimizer multiplicity threshold
    OdeOptions ode{};
};

struct ModelDistance {
    double length = 0.0;
    GeodesicPath path; // from p to q, endpoint error <= 1e-8 per coordinate
    std::vector<double> candidate_lengths; // all connecting geodesics found
    bool multiple_minimizers = false;
};

namespace detail {

struct ShotHit {
    double x, s;
};

/// Height and arc length where the shot from (x0, 0) with launch angle
/// theta first reaches y = dy; nullopt if it exits the domain or runs out
/// of budget first.
inline std::optional<ShotHit> height_at_y(const WarpingFunction& w, double x0, double theta,
                                          double dy, double s_cap, const OdeOptions& opt) {
    std::array<double, 4> u0{x0, 0.0, std::cos(theta), std::sin(theta) / w.m(x0)};
    auto r = shoot(w, u0, s_cap, dy, opt, NoStepCb{});
    if (r.stop != ShotStop::y_target) return std::nullopt;
    return ShotHit{r.u[0], r.s};
}

} // namespace detail

/// Minimal connecting geodesic between two model points, by shooting over
/// the launch angle: uniform bracket scan, then bisection to angle_tol.
/// All roots are collected; ties within tie_tol are reported as
/// multiple-minimizer events. d(boundary, p) = x(p) is exact by
/// construction and needs no shooting (vertical segments).
inline ModelDistance model_distance(const WarpingFunction& w, const ModelPoint& p,
                                    const ModelPoint& q, const ShootingOptions& opt = {}) {
    ModelDistance out;
    const double dy = std::abs(q.y - p.y);
    const double ysign = (q.y >= p.y) ? 1.0 : -1.0;

    auto finalize_path = [&](GeodesicPath path) {
        for (auto& smp : path.samples) smp.y = p.y + ysign * smp.y;
        return path;
    };

    if (dy < 1e-14) {
        // same boundary ray: the vertical segment is exactly minimal
        out.length = std::abs(q.x - p.x);
        if (out.length == 0.0) {
            out.path.samples.push_back({0.0, p.x, p.y, 1.0, 0.0});
            out.path.total_length = 0.0;
            out.candidate_lengths = {0.0};
            return out;
        }
        const double ang = (q.x > p.x) ? 0.0 : kPi;
        out.path = integrate_geodesic(w, {{p.x, p.y}, ang}, out.length, opt.ode);
        out.candidate_lengths = {out.length};
        return out;
    }

    // both points on the boundary with m >= 1 everywhere: any interior path
    // is at least as long as its y-extent, so the boundary geodesic wins
    if (p.x <= 1e-12 && q.x <= 1e-12) {
        double m_min = 1e300;
        for (int i = 0; i <= 512; ++i)
            m_min = std::min(m_min, w.m(w.domain_max() * i / 512.0));
        if (m_min >= 1.0 - 1e-12) {
            out.length = dy;
            out.candidate_lengths = {dy};
            out.path = finalize_path(integrate_geodesic(w, {{0.0, 0.0}, kPi / 2}, dy, opt.ode));
            return out;
        }
    }

    // canonical frame: start at (p.x, 0), y increasing toward dy
    const double s_cap = p.x + q.x + dy + 1.0;

    struct Root {
        double theta, length;
    };
    std::vector<Root> roots;

    const int n = opt.n_brackets;
    std::vector<double> thetas;
    thetas.reserve(n + 96);
    for (int k = 0; k < n; ++k) thetas.push_back(kPi * (k + 0.5) / n);
    // near-vertical connections have roots within the first grid cell; a
    // ratio-2 ladder toward both ends keeps them bracketed
    for (int j = 1; j <= 45; ++j) {
        const double eps = (kPi * 0.5 / n) * std::ldexp(1.0, -j);
        thetas.push_back(eps);
        thetas.push_back(kPi - eps);
    }
    std::sort(thetas.begin(), thetas.end());
    std::vector<std::optional<detail::ShotHit>> hits(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k)
        hits[k] = detail::height_at_y(w, p.x, thetas[k], dy, s_cap, opt.ode);
    auto refine = [&](double lo, double hi, double flo) {
        for (int it = 0; it < 200 && hi - lo > opt.angle_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            auto h = detail::height_at_y(w, p.x, mid, dy, s_cap, opt.ode);
            if (!h) { // shrink toward the defined side
                if (flo > 0)
                    hi = mid;
                else
                    lo = mid;
                continue;
            }
            const double fm = h->x - q.x;
            if ((fm > 0) == (flo > 0))
                lo = mid;
            else
                hi = mid;
        }
        const double theta = 0.5 * (lo + hi);
        auto h = detail::height_at_y(w, p.x, theta, dy, s_cap, opt.ode);
        if (h && std::abs(h->x - q.x) <= 1e-8) roots.push_back({theta, h->s});
    };
    // a root can hide between a defined theta and an undefined neighbor when
    // the shot function's window of definition is narrower than the grid;
    // walk toward the definedness edge and bracket any sign change met
    auto edge_probe = [&](double t_def, double f_def, double t_undef) {
        for (int it = 0; it < 80 && std::abs(t_undef - t_def) > opt.angle_tol; ++it) {
            const double mid = 0.5 * (t_def + t_undef);
            auto h = detail::height_at_y(w, p.x, mid, dy, s_cap, opt.ode);
            if (!h) {
                t_undef = mid;
                continue;
            }
            const double fm = h->x - q.x;
            if ((fm > 0) != (f_def > 0)) {
                if (t_def < mid)
                    refine(t_def, mid, f_def);
                else
                    refine(mid, t_def, fm);
                return;
            }
            t_def = mid;
            f_def = fm;
        }
    };
    for (std::size_t k = 0; k + 1 < thetas.size(); ++k) {
        if (hits[k] && !hits[k + 1]) {
            edge_probe(thetas[k], hits[k]->x - q.x, thetas[k + 1]);
            continue;
        }
        if (!hits[k] && hits[k + 1]) {
            edge_probe(thetas[k + 1], hits[k + 1]->x - q.x, thetas[k]);
            continue;
        }
        if (!hits[k] || !hits[k + 1]) continue;
        const double f0 = hits[k]->x - q.x;
        const double f1 = hits[k + 1]->x - q.x;
        if (f0 == 0.0) {
            roots.push_back({thetas[k], hits[k]->s});
            continue;
        }
        if (f0 * f1 < 0) refine(thetas[k], thetas[k + 1], f0);
    }

    // both points on the boundary: the boundary geodesic is a candidate the
    // angle scan cannot bracket (shots with theta > pi/2 exit immediately)
    const bool boundary_pair = p.x <= 1e-12 && q.x <= 1e-12;
    if (boundary_pair) roots.push_back({kPi / 2, dy});

    if (roots.empty())
        throw ConnectivityError("model_distance: no shooting bracket found within scan resolution");

    std::sort(roots.begin(), roots.end(),
              [](const Root& a, const Root& b) { return a.length < b.length; });
    // drop duplicate detections of the same geodesic
    std::vector<Root> unique_roots;
    for (const auto& r : roots) {
        bool dup = false;
        for (const auto& u : unique_roots)
            if (std::abs(u.theta - r.theta) < 1e-9 && std::abs(u.length - r.length) < 1e-9)
                dup = true;
        if (!dup) unique_roots.push_back(r);
    }

    for (const auto& r : unique_roots) out.candidate_lengths.push_back(r.length);
    out.length = unique_roots.front().length;
    out.multiple_minimizers =
        unique_roots.size() > 1 && unique_roots[1].length - unique_roots[0].length <= opt.tie_tol;
    out.path = finalize_path(
        integrate_geodesic(w, {{p.x, 0.0}, unique_roots.front().theta}, out.length, opt.ode));
    return out;
}

// ---------------------------------------------------------------------------
// conjugate points

namespace detail {

struct GeodesicJacobiRhs {
    const WarpingFunction* w;
    // state: [x, y, x', y', J, J']
    void operator()(double, const std::array<double, 6>& u, std::array<double, 6>& du) const {
        const double m = w->m(u[0]);
        const double dm = w->dm(u[0]);
        const double G = -w->d2m(u[0]) / m;
        du[0] = u[2];
        du[1] = u[3];
        du[2] = m * dm * u[3] * u[3];
        du[3] = -2.0 * (dm / m) * u[2] * u[3];
        du[4] = u[5];
        du[5] = -G * u[4];
    }
};

} // namespace detail

struct ConjugateHit {
    double s;
    ModelPoint point;
};

/// First conjugate point along the geodesic from `init` within length
/// `max_len`, staying inside y in (y_lo, y_hi) and the height domain.
/// The normal Jacobi field with J(0) = 0, J'(0) = 1 is co-integrated and
/// its first sign change located.
inline std::optional<ConjugateHit> first_conjugate_point(const WarpingFunction& w,
                                                         const GeodesicState& init, double max_len,
                                                         double y_lo, double y_hi,
                                                         const OdeOptions& opt = {}) {
    detail::GeodesicJacobiRhs rhs{&w};
    const double m0 = w.m(init.point.x);
    std::array<double, 6> u0{init.point.x, init.point.y, std::cos(init.angle),
                             std::sin(init.angle) / m0,  0.0,
                             1.0};
    const double dmax = w.domain_max();
    auto ev = [&](double s, const std::array<double, 6>& u, std::array<double, 4>& g) {
        g[0] = u[0] + 1e-12;
        g[1] = dmax - u[0];
        g[2] = std::min(u[1] - y_lo, y_hi - u[1]) + 1e-12;
        g[3] = (s < 1e-6) ? 1.0 : u[4];
    };
    auto r = integrate_ode<6, 4>(rhs, 0.0, u0, max_len, opt, ev, NoStepCb{});
    if (r.status == OdeStatus::event && r.event_index == 3)
        return ConjugateHit{r.s, {r.y[0], r.y[1]}};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// sector cut-pair probe

enum class ProbeVerdict { no_violation_found, violation };

struct SectorProbeReport {
    double theta0 = 0.0;
    int pairs_tested = 0;
    std::optional<std::pair<ModelPoint, ModelPoint>> violating_pair;
    ProbeVerdict verdict = ProbeVerdict::no_violation_found;
    // diagnostics
    int n_multiple_minimizers = 0;
    int n_conjugate = 0;
    int n_unconnected = 0;
};

/// Numerical falsification of "the sector y in (0, theta0) has no pair of
/// cut points". Two detectors:
///   * pairwise: sampled point pairs whose minimal connecting geodesics tie
///     within tie_tol, and Jacobi zeros strictly inside a found minimizer;
///   * sweep: geodesics launched from sampled points (boundary points and
///     the tangential direction included, where focal behavior of the
///     boundary concentrates) scanned for conjugate points inside the
///     sector.
/// Absence of a violation is evidence, not proof.
inline SectorProbeReport sector_cut_pair_probe(const WarpingFunction& w, double theta0,
                                               int n_samples, std::uint64_t seed = 20260823,
                                               const ShootingOptions& opt = {}) {
    if (!(theta0 > 0)) throw std::invalid_argument("sector_cut_pair_probe: theta0 must be > 0");
    SectorProbeReport rep;
    rep.theta0 = theta0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uy(1e-3 * theta0, theta0 * (1.0 - 1e-3));
    std::uniform_real_distribution<double> ux(0.0, 0.9 * w.domain_max());
    std::uniform_real_distribution<double> uang(1e-3, kPi - 1e-3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto sample_point = [&]() -> ModelPoint {
        const double x = (u01(rng) < 0.25) ? 0.0 : ux(rng);
        return {x, uy(rng)};
    };
    auto flag = [&](const ModelPoint& a, const ModelPoint& b) {
        if (!rep.violating_pair) rep.violating_pair = std::make_pair(a, b);
        rep.verdict = ProbeVerdict::violation;
    };

    for (int i = 0; i < n_samples; ++i) {
        const ModelPoint a = sample_point();
        const ModelPoint b = sample_point();
        ++rep.pairs_tested;
        try {
            auto d = model_distance(w, a, b, opt);
            if (d.multiple_minimizers && d.length > 1e-9) {
                ++rep.n_multiple_minimizers;
                flag(a, b);
            } else if (d.length > 1e-6) {
                const auto st = d.path.state(0, w);
                auto cj = first_conjugate_point(w, st, d.length * (1.0 - 1e-9), -1e18, 1e18,
                                                opt.ode);
                if (cj) {
                    ++rep.n_conjugate;
                    flag(a, b);
                }
            }
        } catch (const ConnectivityError&) {
            ++rep.n_unconnected;
        }
    }

    // conjugate sweep
    for (int i = 0; i < n_samples; ++i) {
        const ModelPoint a = sample_point();
        const double angles[2] = {uang(rng), kPi / 2};
        for (double ang : angles) {
            auto cj = first_conjugate_point(w, {a, ang}, theta0, 0.0, theta0, opt.ode);
            if (cj) {
                ++rep.n_conjugate;
                flag(a, cj->point);
            }
        }
    }
    return rep;
}

} // namespace gcomp
