#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gcomp/distance.hpp"
#include "gcomp/geodesic.hpp"

namespace gcomp {

/// Side data of an open triangle against the boundary: two boundary-distance
/// sides a, c, connecting side b, optional measured vertex angles and foot
/// gap. Angles are measured against the downward vertical (toward the
/// boundary).
struct TriangleMeasurements {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    std::optional<double> angle_p;
    std::optional<double> angle_q;
    std::optional<double> footgap;

    void validate() const {
        if (!(a > 0) || !(c > 0))
            throw std::invalid_argument("triangle: vertex heights a, c must be positive");
        if (!(b > 0)) throw std::invalid_argument("triangle: side b must be positive");
        if (std::abs(c - a) > b + 1e-12)
            throw std::invalid_argument("triangle: |c - a| <= b violated (heights are 1-Lipschitz)");
    }
};

struct ModelOpenTriangle {
    ModelPoint p, q;
    GeodesicPath opposite_side;
    double angle_p = 0.0, angle_q = 0.0;
    double footgap = 0.0;
    double foot_y_p = 0.0, foot_y_q = 0.0; // feet of the vertical sides
    std::vector<double> alternate_heights;  // other launch angles reaching height c
};

namespace detail {

/// Height x(b) after shooting an arc of length b from (a, 0) with launch
/// angle theta; nullopt if the arc leaves the half-plane or the truncated
/// domain first.
inline std::optional<double> arc_end_height(const WarpingFunction& w, double a, double theta,
                                            double b, const OdeOptions& opt) {
    std::array<double, 4> u0{a, 0.0, std::cos(theta), std::sin(theta) / w.m(a)};
    auto r = shoot(w, u0, b, std::nullopt, opt, NoStepCb{});
    if (r.stop != ShotStop::length) return std::nullopt;
    return r.u[0];
}

} // namespace detail

/// Place the comparison triangle in the model: vertex p at (a, 0), an arc of
/// length b shot over the launch angle until it ends at height c, feet on
/// the boundary directly below the vertices. Among all angles realizing
/// (b, c) only arcs that are minimal between their endpoints are kept; the
/// rest are recorded in alternate_heights.
///
/// Throws TriangleNonexistence when no launch angle realizes the data.
inline ModelOpenTriangle solve_comparison_triangle(const WarpingFunction& w,
                                                   const TriangleMeasurements& t,
                                                   const ShootingOptions& opt = {}) {
    t.validate();
    const double a = t.a, b = t.b, c = t.c;

    struct Root {
        double theta, x_end;
    };
    std::vector<Root> roots;
    const int n = opt.n_brackets;
    std::vector<std::optional<double>> ends(n);
    std::vector<double> thetas(n);
    for (int k = 0; k < n; ++k) {
        thetas[k] = kPi * (k + 0.5) / n;
        ends[k] = detail::arc_end_height(w, a, thetas[k], b, opt.ode);
    }
    auto refine = [&](double lo, double hi, double flo) {
        for (int it = 0; it < 200 && hi - lo > opt.angle_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            auto h = detail::arc_end_height(w, a, mid, b, opt.ode);
            if (!h) {
                if (flo > 0)
                    hi = mid;
                else
                    lo = mid;
                continue;
            }
            const double fm = *h - c;
            if ((fm > 0) == (flo > 0))
                lo = mid;
            else
                hi = mid;
        }
        const double theta = 0.5 * (lo + hi);
        auto h = detail::arc_end_height(w, a, theta, b, opt.ode);
        if (h && std::abs(*h - c) <= 1e-8) roots.push_back({theta, *h});
    };
    for (int k = 0; k + 1 < n; ++k) {
        if (!ends[k] || !ends[k + 1]) continue;
        const double f0 = *ends[k] - c, f1 = *ends[k + 1] - c;
        if (f0 == 0.0) {
            roots.push_back({thetas[k], *ends[k]});
            continue;
        }
        if (f0 * f1 < 0) refine(thetas[k], thetas[k + 1], f0);
    }
    if (roots.empty())
        throw TriangleNonexistence("no launch angle realizes the requested side data in this model");

    ModelOpenTriangle tri;
    bool found = false;
    for (const auto& r : roots) {
        auto path = integrate_geodesic(w, {{a, 0.0}, r.theta}, b, opt.ode);
        const auto& end = path.back();
        if (!found) {
            // minimality of the arc between its endpoints
            auto d = model_distance(w, {a, 0.0}, {end.x, end.y}, opt);
            double min_x = end.x;
            for (const auto& smp : path.samples) min_x = std::min(min_x, smp.x);
            if (d.length >= b - 1e-6 && min_x > 0) {
                tri.p = {a, 0.0};
                tri.q = {end.x, end.y};
                tri.opposite_side = std::move(path);
                tri.angle_p = kPi - r.theta;
                tri.angle_q = std::acos(std::clamp(end.xp, -1.0, 1.0));
                tri.foot_y_p = 0.0;
                tri.foot_y_q = end.y;
                found = true;
                continue;
            }
        }
        tri.alternate_heights.push_back(end.y);
    }
    if (!found)
        throw TriangleNonexistence("every realizing arc fails the minimality check");
    tri.footgap = model_distance(w, {0.0, tri.foot_y_p}, {0.0, tri.foot_y_q}, opt).length;
    return tri;
}

// ---------------------------------------------------------------------------
// thinness

/// Lower bound for the injectivity radius at a given height.
using InjectivityProbe = std::function<double(double)>;

/// Conjugate-distance bound pi / sqrt(sup K) from the model curvature;
/// +infinity when the curvature is nonpositive.
inline InjectivityProbe curvature_injectivity_probe(const WarpingFunction& w) {
    double gmax = -1e300;
    const int n = 512;
    for (int i = 0; i <= n; ++i)
        gmax = std::max(gmax, gaussian_curvature(w, w.domain_max() * i / n));
    return [gmax](double) {
        return gmax > 0 ? kPi / std::sqrt(gmax) : std::numeric_limits<double>::infinity();
    };
}

struct ThinnessResult {
    bool thin = false;
    double bound = 0.0;  // min injectivity bound over the sampled heights
    double margin = 0.0; // bound - b
};

/// A triangle is thin when its connecting side is shorter than every
/// injectivity bound sampled along it.
inline ThinnessResult validate_thinness(const TriangleMeasurements& t,
                                        const std::vector<double>& side_heights,
                                        const InjectivityProbe& probe) {
    t.validate();
    ThinnessResult r;
    r.bound = std::numeric_limits<double>::infinity();
    for (double h : side_heights) r.bound = std::min(r.bound, probe(h));
    r.margin = r.bound - t.b;
    r.thin = t.b < r.bound;
    return r;
}

// ---------------------------------------------------------------------------
// generalized open triangles

struct GeneralizedOpenTriangle {
    ModelPoint vertex_p, vertex_q;
    double foot_y_p = 0.0, foot_y_q = 0.0;
    std::vector<ModelOpenTriangle> pieces; // translated into the common frame
    std::vector<GeodesicPath> broken_side;
    GeodesicPath shortest_arc;
    double broken_length = 0.0;
    double angle_p = 0.0, angle_q = 0.0; // of the shortest arc, vs downward vertical
    std::vector<double> hinge_angles;
    bool contact = false; // shortest arc touches the broken side away from the ends
};

namespace detail {

/// Upper boundary of the compact domain, x as a piecewise-linear function
/// of y built from the broken-side samples (y is nondecreasing along each
/// arc and across the chain).
struct UpperProfile {
    std::vector<double> ys, xs;
    double at(double y) const {
        if (y <= ys.front()) return xs.front();
        if (y >= ys.back()) return xs.back();
        auto it = std::upper_bound(ys.begin(), ys.end(), y);
        const std::size_t i = static_cast<std::size_t>(it - ys.begin());
        const double u = (y - ys[i - 1]) / (ys[i] - ys[i - 1]);
        return xs[i - 1] + u * (xs[i] - xs[i - 1]);
    }
};

inline UpperProfile upper_profile(const std::vector<GeodesicPath>& chain) {
    UpperProfile pr;
    for (const auto& path : chain)
        for (const auto& s : path.samples) {
            if (!pr.ys.empty() && s.y <= pr.ys.back() + 1e-15) continue;
            pr.ys.push_back(s.y);
            pr.xs.push_back(s.x);
        }
    return pr;
}

inline bool contained(const GeodesicPath& path, const UpperProfile& pr, double tol) {
    for (const auto& s : path.samples) {
        if (s.x < -tol) return false;
        if (s.y < pr.ys.front() - tol || s.y > pr.ys.back() + tol) return false;
        if (s.x > pr.at(s.y) + tol) return false;
    }
    return true;
}

} // namespace detail

/// Shortest arc between the extreme vertices inside the domain bounded by
/// the two vertical sides, the boundary, and the broken side. The globally
/// minimal connecting geodesic is tried first; under the hinge condition
/// the domain is convex and that geodesic stays inside. If containment
/// fails, the broken side is shortened by repeated replacement of sub-arcs
/// with local geodesics.
inline GeodesicPath shortest_arc_in_domain(const WarpingFunction& w,
                                           const std::vector<GeodesicPath>& broken_side,
                                           const ModelPoint& from, const ModelPoint& to,
                                           const ShootingOptions& opt = {}) {
    const auto profile = detail::upper_profile(broken_side);
    auto direct = model_distance(w, from, to, opt);
    if (detail::contained(direct.path, profile, 1e-6)) return direct.path;

    // shortening on a node polyline seeded from the broken side
    std::vector<ModelPoint> nodes;
    for (const auto& path : broken_side)
        for (const auto& s : path.samples)
            if (nodes.empty() || std::hypot(s.x - nodes.back().x, s.y - nodes.back().y) > 1e-3)
                nodes.push_back({s.x, s.y});
    nodes.front() = from;
    nodes.back() = to;
    if (nodes.size() < 3) return direct.path;

    auto seg_len = [&](const ModelPoint& u, const ModelPoint& v) {
        return model_distance(w, u, v, opt).length;
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += seg_len(nodes[i], nodes[i + 1]);

    for (int sweep = 0; sweep < 10000; ++sweep) {
        double before = total;
        for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
            auto d = model_distance(w, nodes[i - 1], nodes[i + 1], opt);
            // midpoint of the local geodesic, kept only while inside the domain
            const auto& smp = d.path.samples;
            std::size_t mid = 0;
            for (std::size_t k = 0; k < smp.size(); ++k)
                if (std::abs(smp[k].s - d.length / 2) < std::abs(smp[mid].s - d.length / 2))
                    mid = k;
            ModelPoint cand{smp[mid].x, smp[mid].y};
            if (cand.x >= -1e-9 && cand.x <= profile.at(cand.y) + 1e-9) nodes[i] = cand;
        }
        total = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += seg_len(nodes[i], nodes[i + 1]);
        if (total > before + 1e-12)
            throw SolverError("curve shortening failed to decrease length");
        if (before - total < 1e-10) break;
    }
    auto final_path = model_distance(w, nodes.front(), nodes.back(), opt).path;
    if (!detail::contained(final_path, profile, 1e-6))
        throw ConvexityViolation("shortened arc escapes the comparison domain");
    return final_path;
}

/// Assemble a chain of solved comparison triangles sharing intermediate
/// heights into one generalized triangle: pieces are translated
/// left-to-right along the boundary, hinge sums checked against pi, and
/// the shortest inside arc computed.
inline GeneralizedOpenTriangle glue_generalized_triangle(const WarpingFunction& w,
                                                         const std::vector<TriangleMeasurements>& chain,
                                                         const ShootingOptions& opt = {}) {
    if (chain.empty()) throw std::invalid_argument("glue: empty chain");
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (std::abs(chain[i].c - chain[i + 1].a) > 1e-9)
            throw std::invalid_argument("glue: consecutive pieces must share heights");

    GeneralizedOpenTriangle got;
    double y_off = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        auto tri = solve_comparison_triangle(w, chain[i], opt);
        const double dy = tri.q.y - tri.p.y;
        tri.p.y += y_off;
        tri.q.y += y_off;
        tri.foot_y_p += y_off;
        tri.foot_y_q += y_off;
        for (auto& s : tri.opposite_side.samples) s.y += y_off;
        if (i == 0) {
            got.vertex_p = tri.p;
            got.foot_y_p = tri.foot_y_p;
            got.angle_p = tri.angle_p;
        } else {
            const double hinge = got.pieces.back().angle_q + tri.angle_p;
            got.hinge_angles.push_back(hinge);
            if (hinge > kPi + 1e-6)
                throw ComparisonViolation("hinge angle sum exceeds pi");
        }
        got.vertex_q = tri.q;
        got.foot_y_q = tri.foot_y_q;
        got.angle_q = tri.angle_q;
        got.broken_length += tri.opposite_side.total_length;
        got.broken_side.push_back(tri.opposite_side);
        got.pieces.push_back(std::move(tri));
        y_off += dy;
    }

    if (chain.size() == 1) {
        got.shortest_arc = got.pieces.front().opposite_side;
    } else {
        got.shortest_arc =
            shortest_arc_in_domain(w, got.broken_side, got.vertex_p, got.vertex_q, opt);
        const auto first = got.shortest_arc.state(0, w);
        const auto last = got.shortest_arc.endpoint(w);
        got.angle_p = kPi - first.angle;
        got.angle_q = last.angle;
        // contact with the broken side away from the endpoints
        const auto profile = detail::upper_profile(got.broken_side);
        const auto& smp = got.shortest_arc.samples;
        for (std::size_t k = 1; k + 1 < smp.size(); ++k)
            if (smp[k].x >= profile.at(smp[k].y) - 1e-6) got.contact = true;
    }
    return got;
}

// ---------------------------------------------------------------------------
// comparison reports

struct InequalityCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0; // lhs - rhs
    bool pass = false;
};

struct ComparisonReport {
    TriangleMeasurements measured;
    std::vector<InequalityCheck> checks;
    bool equality_case = false;
    bool all_pass = true;

    void add(std::string name, double lhs, double rhs, double tol) {
        InequalityCheck c{std::move(name), lhs, rhs, lhs - rhs, lhs - rhs >= -tol};
        all_pass = all_pass && c.pass;
        checks.push_back(std::move(c));
    }
    void add_equality(std::string name, double lhs, double rhs, double tol) {
        InequalityCheck c{std::move(name), lhs, rhs, lhs - rhs, std::abs(lhs - rhs) <= tol};
        all_pass = all_pass && c.pass;
        checks.push_back(std::move(c));
    }
};

/// Measured triangle vs its comparison triangle: measured angles and foot
/// gap must dominate the model's. Equality of foot gaps within 1e-6
/// triggers the rigidity clause, under which the angles must agree to 1e-5.
inline ComparisonReport verify_toponogov(const TriangleMeasurements& measured,
                                         const ModelOpenTriangle& model) {
    if (!measured.angle_p || !measured.angle_q || !measured.footgap)
        throw std::invalid_argument("verify_toponogov: measured angles and footgap required");
    ComparisonReport rep;
    rep.measured = measured;
    rep.add("angle_p", *measured.angle_p, model.angle_p, 1e-6);
    rep.add("angle_q", *measured.angle_q, model.angle_q, 1e-6);
    rep.add("footgap", *measured.footgap, model.footgap, 1e-6);
    rep.equality_case = std::abs(*measured.footgap - model.footgap) <= 1e-6;
    if (rep.equality_case) {
        rep.add_equality("angle_p_equality", *measured.angle_p, model.angle_p, 1e-5);
        rep.add_equality("angle_q_equality", *measured.angle_q, model.angle_q, 1e-5);
    }
    return rep;
}

/// Measured triangle vs a glued generalized triangle: angle domination plus
/// the length chain c - a <= d(ends) <= L(shortest arc) <= sum of pieces.
inline ComparisonReport verify_toponogov(const WarpingFunction& w,
                                         const TriangleMeasurements& measured,
                                         const GeneralizedOpenTriangle& got,
                                         const ShootingOptions& opt = {}) {
    ComparisonReport rep;
    rep.measured = measured;
    if (measured.angle_p) rep.add("angle_p", *measured.angle_p, got.angle_p, 1e-6);
    if (measured.angle_q) rep.add("angle_q", *measured.angle_q, got.angle_q, 1e-6);
    const double d_ends = model_distance(w, got.vertex_p, got.vertex_q, opt).length;
    rep.add("chain_height_vs_distance", d_ends, std::abs(got.vertex_q.x - got.vertex_p.x), 1e-6);
    rep.add("chain_distance_vs_arc", got.shortest_arc.total_length, d_ends, 1e-6);
    rep.add("chain_arc_vs_broken", got.broken_length, got.shortest_arc.total_length, 1e-6);
    for (std::size_t i = 0; i < got.hinge_angles.size(); ++i)
        rep.add("hinge_" + std::to_string(i), kPi, got.hinge_angles[i], 1e-6);
    return rep;
}

} // namespace gcomp
