#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gcomp/sturm.hpp"
#include "gcomp/testbed.hpp"
#include "gcomp/triangle.hpp"

namespace gcomp::suites {

struct SuiteSummary {
    std::string suite;
    int cases = 0;
    int passes = 0;
    double worst_residual = 0.0;
    double runtime_seconds = 0.0;

    bool all_pass() const { return passes == cases; }
};

struct SuiteResult {
    SuiteSummary summary;
    std::string csv; // header + one row per case; no timestamps, byte-stable
};

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvBuilder {
    std::string body;
    void header(const std::string& h) { body += h + "\n"; }
    template <class... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((body += (first ? "" : ","), body += cell(cells), first = false), ...);
        body += "\n";
    }
    static std::string cell(double v) { return num(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(const char* v) { return v; }
    static std::string cell(const std::string& v) { return v; }
};

inline std::mt19937_64 case_rng(std::uint64_t seed, int index) {
    return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(index));
}

class Timer {
public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

} // namespace detail

// ---------------------------------------------------------------------------

/// Closed-form distance on the flat model.
inline double flat_distance_oracle(const ModelPoint& p, const ModelPoint& q) {
    return std::hypot(q.x - p.x, q.y - p.y);
}

/// Closed-form distance on the cosh model (hyperbolic plane in coordinates
/// adapted to a base geodesic, both points on the same side):
///   cosh d = cosh x1 cosh x2 cosh(dy) - sinh x1 sinh x2.
inline double hyperbolic_distance_oracle(const ModelPoint& p, const ModelPoint& q) {
    const double c = std::cosh(p.x) * std::cosh(q.x) * std::cosh(q.y - p.y) -
                     std::sinh(p.x) * std::sinh(q.x);
    return std::acosh(std::max(c, 1.0));
}

/// Distance solver vs closed-form oracles on the flat and cosh models.
inline SuiteResult geodesic_oracle_suite(std::uint64_t seed, int n_pairs = 100,
                                         const ShootingOptions& opt = {}) {
    detail::Timer timer;
    SuiteResult res;
    res.summary.suite = "geodesic-oracle";
    detail::CsvBuilder csv;
    csv.header("model,case,x1,y1,x2,y2,oracle,computed,error,pass");

    auto flat = WarpingFunction::constant();
    auto hyp = WarpingFunction::hyperbolic();
    struct Entry {
        const WarpingFunction* w;
        double (*oracle)(const ModelPoint&, const ModelPoint&);
        const char* name;
    };
    const Entry entries[2] = {{&flat, flat_distance_oracle, "const:1"},
                              {&hyp, hyperbolic_distance_oracle, "cosh"}};
    for (const auto& e : entries) {
        for (int i = 0; i < n_pairs; ++i) {
            auto rng = detail::case_rng(seed, i);
            std::uniform_real_distribution<double> ux(0.05, 3.0), uy(0.0, 3.0);
            ModelPoint p{ux(rng), 0.0}, q{ux(rng), uy(rng)};
            const double oracle = e.oracle(p, q);
            const double computed = model_distance(*e.w, p, q, opt).length;
            const double err = std::abs(computed - oracle);
            const bool pass = err <= 1e-7;
            ++res.summary.cases;
            if (pass) ++res.summary.passes;
            res.summary.worst_residual = std::max(res.summary.worst_residual, err);
            csv.row(e.name, i, p.x, p.y, q.x, q.y, oracle, computed, err, pass ? "1" : "0");
        }
    }
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

/// Angle and foot-gap comparison: flat testbed against the cosh model.
inline SuiteResult toponogov_suite(std::uint64_t seed, int n_triangles = 200,
                                   const WarpingFunction& testbed_w = WarpingFunction::constant(),
                                   const WarpingFunction& model_w = WarpingFunction::hyperbolic(),
                                   const ShootingOptions& opt = {}) {
    detail::Timer timer;
    auto s = SyntheticSurface::half_plane(testbed_w);
    auto rb = radial_bound_check(s, model_w);
    if (!rb.ok)
        throw OrderingError("toponogov suite: testbed curvature drops below the model bound");

    SuiteResult res;
    res.summary.suite = "toponogov";
    detail::CsvBuilder csv;
    csv.header("case,a,b,c,angle_p_residual,angle_q_residual,footgap_residual,pass");
    for (int i = 0; i < n_triangles; ++i) {
        auto rng = detail::case_rng(seed, i);
        std::uniform_real_distribution<double> ulog(std::log(0.1), std::log(2.4));
        std::uniform_real_distribution<double> udy(0.2, 2.0);
        SurfacePoint p{std::exp(ulog(rng)), 0.0}, q{std::exp(ulog(rng)), udy(rng)};
        auto measured = extract_triangle(s, p, q, opt);
        auto model = solve_comparison_triangle(model_w, measured, opt);
        auto cmp = verify_toponogov(measured, model);
        double r_ap = 0, r_aq = 0, r_fg = 0;
        for (const auto& c : cmp.checks) {
            if (c.name == "angle_p") r_ap = c.residual;
            if (c.name == "angle_q") r_aq = c.residual;
            if (c.name == "footgap") r_fg = c.residual;
            res.summary.worst_residual = std::min(res.summary.worst_residual, c.residual);
        }
        ++res.summary.cases;
        if (cmp.all_pass) ++res.summary.passes;
        csv.row(i, measured.a, measured.b, measured.c, r_ap, r_aq, r_fg,
                cmp.all_pass ? "1" : "0");
    }
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

/// Chains of subdivided triangles glued into generalized triangles.
inline SuiteResult gluing_suite(std::uint64_t seed, int n_triangles = 50,
                                const ShootingOptions& opt = {}) {
    detail::Timer timer;
    auto flat = WarpingFunction::constant();
    auto hyp = WarpingFunction::hyperbolic();
    auto s = SyntheticSurface::half_plane(flat);

    SuiteResult res;
    res.summary.suite = "gluing";
    detail::CsvBuilder csv;
    csv.header("case,pieces,broken_length,arc_length,end_distance,height_gap,max_hinge,pass");
    for (int i = 0; i < n_triangles; ++i) {
        auto rng = detail::case_rng(seed, i);
        std::uniform_real_distribution<double> ulog(std::log(0.3), std::log(2.0));
        std::uniform_real_distribution<double> udy(0.4, 1.6);
        std::uniform_int_distribution<int> uk(2, 4);
        SurfacePoint p{std::exp(ulog(rng)), 0.0}, q{std::exp(ulog(rng)), udy(rng)};
        const int k = uk(rng);
        auto chain = subdivided_chain(s, p, q, k, opt);
        auto got = glue_generalized_triangle(hyp, chain, opt);

        const double d_ends = model_distance(hyp, got.vertex_p, got.vertex_q, opt).length;
        const double height_gap = std::abs(got.vertex_q.x - got.vertex_p.x);
        double max_hinge = 0.0;
        for (double h : got.hinge_angles) max_hinge = std::max(max_hinge, h);
        const bool pass = max_hinge <= kPi + 1e-6 && height_gap <= d_ends + 1e-6 &&
                          d_ends <= got.shortest_arc.total_length + 1e-6 &&
                          got.shortest_arc.total_length <= got.broken_length + 1e-6;
        double worst = std::min({kPi + 1e-6 - max_hinge, d_ends - height_gap,
                                 got.shortest_arc.total_length - d_ends,
                                 got.broken_length - got.shortest_arc.total_length});
        res.summary.worst_residual = std::min(res.summary.worst_residual, worst);
        ++res.summary.cases;
        if (pass) ++res.summary.passes;
        csv.row(i, k, got.broken_length, got.shortest_arc.total_length, d_ends, height_gap,
                max_hinge, pass ? "1" : "0");
    }
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

/// First zeros, index-form identity, and the boundary-term cancellation.
inline SuiteResult sturm_suite(std::uint64_t seed, int n_profiles = 100) {
    detail::Timer timer;
    SuiteResult res;
    res.summary.suite = "sturm";
    detail::CsvBuilder csv;
    csv.header("check,case,value,reference,residual,pass");

    auto record = [&](const char* check, int i, double value, double ref, double tol) {
        const double residual = std::abs(value - ref);
        const bool pass = residual <= tol;
        ++res.summary.cases;
        if (pass) ++res.summary.passes;
        res.summary.worst_residual = std::max(res.summary.worst_residual, residual);
        csv.row(check, i, value, ref, residual, pass ? "1" : "0");
    };

    // first zero of f'' = 0, f(0)=1, f'(0)=-lambda is 1/lambda
    const double lambdas[3] = {0.1, 0.5, 2.0};
    for (int i = 0; i < 3; ++i) {
        const double lam = lambdas[i];
        auto f = sturm::solve_scalar_jacobi({[](double) { return 0.0; }, 1.0, -lam, 2.0 / lam});
        auto z = sturm::first_zero(f);
        record("first_zero", i, z.t.value_or(-1.0), 1.0 / lam, 1e-8);
    }

    // integration-by-parts identity on random bounded profiles
    for (int i = 0; i < n_profiles; ++i) {
        auto rng = detail::case_rng(seed, i);
        std::uniform_real_distribution<double> ua(-1.0, 1.0), uw(0.3, 3.0), ul(1.0, 4.0);
        const double alpha = ua(rng), beta = ua(rng), omega = uw(rng), lam = 0.5 * (ua(rng) + 1);
        const double horizon = ul(rng);
        auto K = [=](double t) { return alpha + beta * std::cos(omega * t); };
        auto f = sturm::solve_scalar_jacobi({K, 1.0, -lam, horizon});
        const double ell = 0.9 * horizon;
        auto [I, Ib] = sturm::index_form_value(K, f, lam, ell);
        const double parts = f.value(ell) * f.derivative(ell) - f.value(0) * f.derivative(0);
        record("index_identity", i, I, parts, 1e-6 * (1 + std::abs(I)));
        (void)Ib;
    }

    // boundary-term cancellation: K = 0, f = 1 - t/2 on [0, 2], lambda = 1/2
    {
        auto K0 = [](double) { return 0.0; };
        auto f = sturm::solve_scalar_jacobi({K0, 1.0, -0.5, 2.0});
        auto [I, Ib] = sturm::index_form_value(K0, f, 0.5, 2.0);
        record("cancellation_I", 0, I, 0.5, 1e-8);
        record("cancellation_Ib", 0, Ib, 0.0, 1e-8);
    }
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

/// Splitting verdicts for the shipped model families.
inline SuiteResult splitting_suite() {
    detail::Timer timer;
    SuiteResult res;
    res.summary.suite = "splitting";
    detail::CsvBuilder csv;
    csv.header("model,verdict,expected,integral_estimate,liminf_estimate,pass");

    struct Case {
        WarpingFunction w;
        sturm::SplittingCase expected;
    };
    std::vector<Case> cases;
    cases.push_back({WarpingFunction::constant(), sturm::SplittingCase::ST1});
    cases.push_back({WarpingFunction::exp_decay(), sturm::SplittingCase::ST2});
    cases.push_back({WarpingFunction::hyperbolic(), sturm::SplittingCase::none});
    cases.push_back({WarpingFunction(
                         "untagged-cosh", [](double t) { return std::cosh(t); },
                         [](double t) { return std::sinh(t); },
                         [](double t) { return std::cosh(t); }, 50.0, TailBehavior::unknown),
                     sturm::SplittingCase::undetermined});

    for (const auto& c : cases) {
        auto v = sturm::splitting_classify(c.w);
        const bool pass = v.verdict == c.expected;
        ++res.summary.cases;
        if (pass) ++res.summary.passes;
        csv.row(c.w.name(), sturm::to_string(v.verdict), sturm::to_string(c.expected),
                v.integral_estimate, v.liminf_estimate, pass ? "1" : "0");
    }
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

/// Flat-cylinder splitting checks.
inline SuiteResult cylinder_suite(std::uint64_t seed, int n_probes = 100) {
    detail::Timer timer;
    SuiteResult res;
    res.summary.suite = "cylinder";
    auto rep = cylinder_splitting_experiment(2 * kPi, 2.0, n_probes, seed);
    detail::CsvBuilder csv;
    csv.header("probe,x,theta,d1,d2,n_minimizers,is_midpoint");
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        const auto& smp = rep.samples[i];
        csv.row(static_cast<int>(i), smp.point.x, smp.point.y, smp.d1, smp.d2, smp.n_minimizers,
                smp.is_midpoint ? "1" : "0");
    }
    res.summary.cases = 5;
    res.summary.passes = (rep.cut_locus_ok ? 1 : 0) + (rep.halfway_ok ? 1 : 0) +
                         (rep.angles_ok ? 1 : 0) + (rep.parallel_ok ? 1 : 0) +
                         (rep.pullback_ok ? 1 : 0);
    res.summary.worst_residual =
        std::max({rep.worst_cut_residual, rep.worst_angle_residual, rep.worst_parallel_residual,
                  rep.worst_pullback_residual});
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

/// Equality / rigidity case with testbed warping equal to the model.
inline SuiteResult rigidity_suite(std::uint64_t seed, int n_triangles = 50,
                                  const ShootingOptions& opt = {}) {
    detail::Timer timer;
    SuiteResult res;
    res.summary.suite = "rigidity";
    detail::CsvBuilder csv;
    csv.header("model,case,equality,angle_residual,footgap_residual,pass");

    const WarpingFunction models[2] = {WarpingFunction::constant(),
                                       WarpingFunction::hyperbolic()};
    for (const auto& w : models) {
        auto rep = rigidity_equality_check(w, n_triangles, seed, 0.0, opt);
        for (int i = 0; i < rep.n_triangles; ++i) {
            const auto& cmp = rep.reports[static_cast<std::size_t>(i)];
            double a_res = 0, f_res = 0;
            for (const auto& c : cmp.checks) {
                if (c.name == "angle_p_equality" || c.name == "angle_q_equality")
                    a_res = std::max(a_res, std::abs(c.residual));
                if (c.name == "footgap") f_res = std::abs(c.residual);
            }
            const bool pass = cmp.equality_case && cmp.all_pass;
            ++res.summary.cases;
            if (pass) ++res.summary.passes;
            res.summary.worst_residual = std::max(res.summary.worst_residual, a_res);
            csv.row(w.name(), i, cmp.equality_case ? "1" : "0", a_res, f_res, pass ? "1" : "0");
        }
    }
    res.csv = std::move(csv.body);
    res.summary.runtime_seconds = timer.seconds();
    return res;
}

} // namespace gcomp::suites
