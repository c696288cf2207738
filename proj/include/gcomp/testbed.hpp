#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gcomp/distance.hpp"
#include "gcomp/triangle.hpp"

namespace gcomp {

struct SurfacePoint {
    double x = 0.0; // height above the (first) boundary component
    double y = 0.0; // boundary coordinate; the angle coordinate on a cylinder
};

/// Ground-truth surface: either a rotationally symmetric half-plane
/// {x >= 0} with metric dx^2 + n(x)^2 dy^2, or a flat cylinder
/// [0, height] x circle with two boundary circles.
class SyntheticSurface {
public:
    static SyntheticSurface half_plane(WarpingFunction n) {
        SyntheticSurface s;
        s.n_.emplace(std::move(n));
        return s;
    }
    static SyntheticSurface flat_cylinder(double circumference, double height) {
        if (!(circumference > 0) || !(height > 0))
            throw std::invalid_argument("cylinder: circumference and height must be positive");
        SyntheticSurface s;
        s.circumference_ = circumference;
        s.height_ = height;
        return s;
    }

    bool is_cylinder() const { return !n_.has_value(); }
    const WarpingFunction& warping() const { return *n_; }
    double circumference() const { return circumference_; }
    double height() const { return height_; }

    double boundary_distance(const SurfacePoint& p) const {
        return is_cylinder() ? std::min(p.x, height_ - p.x) : p.x;
    }

    /// Wrapped angular offset from a to b, minimizing |offset + w * circ|
    /// over windings |w| <= 3.
    double wrap_offset(double ya, double yb, int* winding = nullptr) const {
        double best = yb - ya;
        int best_w = 0;
        for (int w = -3; w <= 3; ++w) {
            const double cand = yb - ya + w * circumference_;
            if (std::abs(cand) < std::abs(best)) {
                best = cand;
                best_w = w;
            }
        }
        if (winding) *winding = best_w;
        return best;
    }

private:
    SyntheticSurface() = default;
    std::optional<WarpingFunction> n_;
    double circumference_ = 0.0, height_ = 0.0;
};

struct SurfaceGeodesic {
    double length = 0.0;
    double angle_p = 0.0, angle_q = 0.0; // vs the downward vertical at each end
    bool multiple_minimizers = false;
    GeodesicPath path;
    int winding = 0; // cylinder only
};

/// Minimal connecting geodesic on the testbed. Half-planes reuse the model
/// shooting solver; cylinder geodesics are straight lines in the unrolled
/// cover, minimized over windings |w| <= 3.
inline SurfaceGeodesic surface_geodesic_bvp(const SyntheticSurface& s, const SurfacePoint& p,
                                            const SurfacePoint& q, const ShootingOptions& opt = {}) {
    SurfaceGeodesic out;
    if (!s.is_cylinder()) {
        auto d = model_distance(s.warping(), {p.x, p.y}, {q.x, q.y}, opt);
        out.length = d.length;
        out.multiple_minimizers = d.multiple_minimizers;
        out.path = d.path;
        if (d.length > 0) {
            const auto first = d.path.state(0, s.warping());
            const auto last = d.path.endpoint(s.warping());
            out.angle_p = kPi - first.angle;
            out.angle_q = last.angle;
        }
        return out;
    }
    const double circ = s.circumference();
    double best = 1e300, second = 1e300, best_dth = 0.0;
    int best_w = 0;
    for (int w = -3; w <= 3; ++w) {
        const double dth = q.y - p.y + w * circ;
        const double len = std::hypot(q.x - p.x, dth);
        if (len < best) {
            second = best;
            best = len;
            best_dth = dth;
            best_w = w;
        } else if (len < second) {
            second = len;
        }
    }
    out.length = best;
    out.winding = best_w;
    out.multiple_minimizers = (second - best) <= 1e-9 && best > 1e-9;
    const double dx = q.x - p.x;
    if (best > 0) {
        out.angle_p = std::acos(std::clamp(-dx / best, -1.0, 1.0));
        out.angle_q = std::acos(std::clamp(dx / best, -1.0, 1.0));
    }
    const int k = 16;
    for (int i = 0; i <= k; ++i) {
        const double u = static_cast<double>(i) / k;
        out.path.samples.push_back({u * best, p.x + u * dx, p.y + u * best_dth,
                                    best > 0 ? dx / best : 0.0,
                                    best > 0 ? best_dth / best : 0.0});
    }
    out.path.total_length = best;
    return out;
}

/// Open-triangle side data of a point pair: vertical boundary segments give
/// a and c, the BVP gives b and the vertex angles, and the foot gap is the
/// surface distance between the two feet.
inline TriangleMeasurements extract_triangle(const SyntheticSurface& s, const SurfacePoint& p,
                                             const SurfacePoint& q, const ShootingOptions& opt = {}) {
    if (!(s.boundary_distance(p) > 0) || !(s.boundary_distance(q) > 0))
        throw std::invalid_argument("extract_triangle: vertices must be off the boundary");
    auto g = surface_geodesic_bvp(s, p, q, opt);
    TriangleMeasurements t;
    t.a = s.boundary_distance(p);
    t.c = s.boundary_distance(q);
    t.b = g.length;
    t.angle_p = g.angle_p;
    t.angle_q = g.angle_q;
    if (!s.is_cylinder()) {
        t.footgap = model_distance(s.warping(), {0.0, p.y}, {0.0, q.y}, opt).length;
    } else {
        t.footgap = std::abs(s.wrap_offset(p.y, q.y));
    }
    return t;
}

struct RadialBoundCheck {
    bool ok = false;
    double worst_margin = 0.0; // min over the grid of K_testbed - G_model
};

/// Pointwise curvature ordering K >= G between testbed and model over their
/// shared height range.
inline RadialBoundCheck radial_bound_check(const SyntheticSurface& s, const WarpingFunction& w,
                                           int grid_n = 512) {
    RadialBoundCheck r;
    const double hmax = s.is_cylinder() ? std::min(s.height(), w.domain_max())
                                        : std::min(s.warping().domain_max(), w.domain_max());
    r.worst_margin = 1e300;
    for (int i = 0; i <= grid_n; ++i) {
        const double t = hmax * i / grid_n;
        const double K = s.is_cylinder() ? 0.0 : gaussian_curvature(s.warping(), t);
        r.worst_margin = std::min(r.worst_margin, K - gaussian_curvature(w, t));
    }
    r.ok = r.worst_margin >= -1e-9;
    return r;
}

/// Split the minimal geodesic between p and q into k arcs of equal length
/// and return the chain of per-arc side data; consecutive pieces share
/// heights by construction.
inline std::vector<TriangleMeasurements> subdivided_chain(const SyntheticSurface& s,
                                                          const SurfacePoint& p,
                                                          const SurfacePoint& q, int k,
                                                          const ShootingOptions& opt = {}) {
    if (k < 1) throw std::invalid_argument("subdivided_chain: k must be >= 1");
    if (s.is_cylinder())
        throw std::invalid_argument("subdivided_chain: half-plane testbeds only");
    auto g = surface_geodesic_bvp(s, p, q, opt);
    const auto& w = s.warping();
    const auto init = g.path.state(0, w);

    std::vector<double> heights(k + 1);
    heights[0] = p.x;
    for (int i = 1; i < k; ++i) {
        auto sub = integrate_geodesic(w, init, g.length * i / k, opt.ode);
        heights[i] = sub.back().x;
    }
    heights[k] = q.x;

    std::vector<TriangleMeasurements> chain(k);
    for (int i = 0; i < k; ++i) {
        chain[i].a = heights[i];
        chain[i].b = g.length / k;
        chain[i].c = heights[i + 1];
    }
    return chain;
}

// ---------------------------------------------------------------------------
// cylinder experiment

struct CutLocusSample {
    SurfacePoint point;
    double d1 = 0.0, d2 = 0.0; // distances to the two boundary circles
    int n_minimizers = 0;
    bool is_midpoint = false;
};

struct CylinderExperimentReport {
    double circumference = 0.0, height = 0.0;
    int n_probes = 0;
    std::vector<CutLocusSample> samples;
    bool no_evidence = false; // zero probes: vacuous
    // (i) cut locus = mid-level, (ii) boundary distance <= height/2,
    // (iii) cut-locus triangle angles all pi/2, (iv) d(mu1(t), mu2(t))
    // constant, (v) product-map pullback = product metric
    bool cut_locus_ok = false, halfway_ok = false, angles_ok = false, parallel_ok = false,
         pullback_ok = false;
    double worst_cut_residual = 0.0, worst_angle_residual = 0.0, worst_parallel_residual = 0.0,
           worst_pullback_residual = 0.0;

    bool all_ok() const {
        return no_evidence ||
               (cut_locus_ok && halfway_ok && angles_ok && parallel_ok && pullback_ok);
    }
};

/// Splitting checks on the flat cylinder, where every quantity is closed
/// form: the cut locus of the two boundary circles is the mid-level circle,
/// triangles between cut points are right-angled, boundary-orthogonal rays
/// stay equidistant, and the product chart is an isometry.
inline CylinderExperimentReport cylinder_splitting_experiment(double circumference, double height,
                                                              int n_probes,
                                                              std::uint64_t seed = 20260823) {
    auto s = SyntheticSurface::flat_cylinder(circumference, height);
    CylinderExperimentReport rep;
    rep.circumference = circumference;
    rep.height = height;
    rep.n_probes = n_probes;
    if (n_probes <= 0) {
        rep.no_evidence = true;
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(1e-3 * height, height * (1 - 1e-3));
    std::uniform_real_distribution<double> uth(0.0, circumference);

    rep.cut_locus_ok = rep.halfway_ok = rep.angles_ok = rep.parallel_ok = rep.pullback_ok = true;

    for (int i = 0; i < n_probes; ++i) {
        SurfacePoint p;
        // every fourth probe deliberately on the mid-level circle
        p.x = (i % 4 == 0) ? height / 2 : ux(rng);
        p.y = uth(rng);
        CutLocusSample smp;
        smp.point = p;
        smp.d1 = p.x;
        smp.d2 = height - p.x;
        smp.is_midpoint = std::abs(smp.d1 - smp.d2) <= 1e-8 &&
                          std::abs(smp.d1 + smp.d2 - height) <= 1e-8;
        smp.n_minimizers = std::abs(smp.d1 - smp.d2) <= 1e-8 ? 2 : 1;
        // (i): midpoint flag must coincide with the mid-level set
        const double mid_gap = std::abs(p.x - height / 2);
        const bool on_mid = mid_gap <= 1e-8;
        if (smp.is_midpoint != on_mid) rep.cut_locus_ok = false;
        rep.worst_cut_residual = std::max(rep.worst_cut_residual,
                                          smp.is_midpoint ? mid_gap : 0.0);
        // (ii)
        if (s.boundary_distance(p) > height / 2 + 1e-12) rep.halfway_ok = false;
        rep.samples.push_back(smp);
    }

    // (iii): triangles with both vertices on the cut locus
    for (int i = 0; i < n_probes; ++i) {
        SurfacePoint p{height / 2, uth(rng)}, q{height / 2, uth(rng)};
        if (std::abs(s.wrap_offset(p.y, q.y)) < 1e-6) continue;
        auto g = surface_geodesic_bvp(s, p, q);
        // angles against both boundary components at both vertices
        const double dx = q.x - p.x;
        const double angles[4] = {std::acos(std::clamp(-dx / g.length, -1.0, 1.0)),
                                  std::acos(std::clamp(dx / g.length, -1.0, 1.0)),
                                  std::acos(std::clamp(dx / g.length, -1.0, 1.0)),
                                  std::acos(std::clamp(-dx / g.length, -1.0, 1.0))};
        for (double a : angles) {
            rep.worst_angle_residual = std::max(rep.worst_angle_residual, std::abs(a - kPi / 2));
            if (std::abs(a - kPi / 2) > 1e-6) rep.angles_ok = false;
        }
    }

    // (iv): boundary-orthogonal rays from two feet stay equidistant
    {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double th1 = uth(rng), th2 = uth(rng);
        double d0 = -1.0;
        for (int i = 0; i <= 64; ++i) {
            const double t = height * i / 64.0;
            auto g = surface_geodesic_bvp(s, {t, th1}, {t, th2});
            if (d0 < 0) d0 = g.length;
            rep.worst_parallel_residual =
                std::max(rep.worst_parallel_residual, std::abs(g.length - d0));
        }
        (void)u01;
        if (rep.worst_parallel_residual > 1e-8) rep.parallel_ok = false;
    }

    // (v): finite-difference pullback of the chart (t, theta) -> cylinder
    {
        const double h = 1e-3;
        for (int i = 0; i < 16; ++i) {
            const double t = ux(rng), th = uth(rng);
            auto dist = [&](SurfacePoint a, SurfacePoint b) {
                return surface_geodesic_bvp(s, a, b).length;
            };
            const double gtt = std::pow(dist({t - h, th}, {t + h, th}) / (2 * h), 2);
            const double gthth = std::pow(dist({t, th - h}, {t, th + h}) / (2 * h), 2);
            const double dpp = dist({t - h, th - h}, {t + h, th + h});
            const double dpm = dist({t - h, th + h}, {t + h, th - h});
            const double gtth = (dpp * dpp - dpm * dpm) / (8 * h * h);
            const double res = std::max({std::abs(gtt - 1.0), std::abs(gthth - 1.0),
                                         std::abs(gtth)});
            rep.worst_pullback_residual = std::max(rep.worst_pullback_residual, res);
        }
        if (rep.worst_pullback_residual > 1e-10) rep.pullback_ok = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// rigidity / equality case

struct RigidityReport {
    int n_triangles = 0;
    int n_equality = 0;
    int n_pass = 0;
    double max_angle_residual = 0.0;
    double max_footgap_residual = 0.0;
    std::vector<ComparisonReport> reports;

    bool all_equality() const { return n_equality == n_triangles && n_pass == n_triangles; }
};

/// Equality case end-to-end: testbed warping equal to the model warping, so
/// measured and comparison triangles must coincide. An optional foot-gap
/// perturbation exercises the non-equality branch.
inline RigidityReport rigidity_equality_check(const WarpingFunction& w, int n_triangles,
                                              std::uint64_t seed = 20260823,
                                              double footgap_perturbation = 0.0,
                                              const ShootingOptions& opt = {}) {
    auto s = SyntheticSurface::half_plane(w);
    RigidityReport rep;
    rep.n_triangles = n_triangles;
    const double hi = 0.8 * w.domain_max();
    for (int i = 0; i < n_triangles; ++i) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + i); // per-case stream
        std::uniform_real_distribution<double> ulog(std::log(0.1), std::log(std::min(hi, 3.0)));
        std::uniform_real_distribution<double> udy(0.2, 2.0);
        SurfacePoint p{std::exp(ulog(rng)), 0.0};
        SurfacePoint q{std::exp(ulog(rng)), udy(rng)};
        auto measured = extract_triangle(s, p, q, opt);
        if (footgap_perturbation != 0.0) *measured.footgap += footgap_perturbation;
        auto model = solve_comparison_triangle(w, measured, opt);
        auto cmp = verify_toponogov(measured, model);
        rep.reports.push_back(cmp);
        if (cmp.all_pass) ++rep.n_pass;
        if (cmp.equality_case) ++rep.n_equality;
        rep.max_footgap_residual =
            std::max(rep.max_footgap_residual, std::abs(*measured.footgap - model.footgap));
        rep.max_angle_residual =
            std::max({rep.max_angle_residual, std::abs(*measured.angle_p - model.angle_p),
                      std::abs(*measured.angle_q - model.angle_q)});
    }
    return rep;
}

} // namespace gcomp
