#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gcomp/errors.hpp"

namespace gcomp {

/// Declared behavior of m(t) as t -> infinity. Divergence of improper
/// integrals is not decidable from finite data, so classifiers combine
/// numeric evidence with this tag.
enum class TailBehavior { unknown, bounded_above, grows_unbounded, decays_to_zero };

inline const char* to_string(TailBehavior t) {
    switch (t) {
        case TailBehavior::bounded_above: return "bounded-above";
        case TailBehavior::grows_unbounded: return "grows-unbounded";
        case TailBehavior::decays_to_zero: return "decays-to-zero";
        default: return "unknown";
    }
}

/// Warping profile m of the model half-plane {x >= 0} with metric
/// dx^2 + m(x)^2 dy^2. Construction enforces m > 0 on [0, domain_max],
/// m(0) = 1 and m'(0) = 0 (totally geodesic boundary), and consistency
/// of the supplied second derivative with the first.
class WarpingFunction {
public:
    using Fn = std::function<double(double)>;

    WarpingFunction(std::string name, Fn m, Fn dm, Fn d2m, double domain_max,
                    TailBehavior tail = TailBehavior::unknown)
        : name_(std::move(name)), m_(std::move(m)), dm_(std::move(dm)), d2m_(std::move(d2m)),
          domain_max_(domain_max), tail_(tail) {
        validate(/*require_geodesic_boundary=*/true);
    }

    /// Build from m alone; dm and d2m fall back to central differences
    /// with step h = 1e-5 * max(1, t), using even reflection at t = 0.
    static WarpingFunction with_numeric_derivatives(std::string name, Fn m, double domain_max,
                                                    TailBehavior tail = TailBehavior::unknown) {
        Fn dm = [m, domain_max](double t) {
            const double h = 1e-5 * std::max(1.0, t);
            return (eval_reflected(m, domain_max, t + h) - eval_reflected(m, domain_max, t - h)) /
                   (2 * h);
        };
        Fn d2m = [m, domain_max](double t) {
            const double h = 1e-4 * std::max(1.0, t); // larger step: h^-2 amplifies roundoff
            return (eval_reflected(m, domain_max, t + h) - 2 * eval_reflected(m, domain_max, t) +
                    eval_reflected(m, domain_max, t - h)) /
                   (h * h);
        };
        return WarpingFunction(std::move(name), std::move(m), std::move(dm), std::move(d2m),
                               domain_max, tail);
    }

    double m(double t) const { return m_(t); }
    double dm(double t) const { return dm_(t); }
    double d2m(double t) const { return d2m_(t); }
    double domain_max() const { return domain_max_; }
    TailBehavior tail() const { return tail_; }
    const std::string& name() const { return name_; }
    bool geodesic_boundary() const { return geodesic_boundary_; }

    // --- shipped families ---

    static WarpingFunction constant(double c = 1.0, double domain_max = 50.0) {
        return WarpingFunction(
            c == 1.0 ? "const:1" : "const:" + std::to_string(c), [c](double) { return c; },
            [](double) { return 0.0; }, [](double) { return 0.0; }, domain_max,
            TailBehavior::bounded_above);
    }

    static WarpingFunction hyperbolic(double domain_max = 50.0) {
        return WarpingFunction(
            "cosh", [](double t) { return std::cosh(t); }, [](double t) { return std::sinh(t); },
            [](double t) { return std::cosh(t); }, domain_max, TailBehavior::grows_unbounded);
    }

    /// m(t) = exp(-t). This profile has m'(0) = -1, so it does not carry a
    /// totally geodesic boundary; it is accepted for splitting
    /// classification only and must not be handed to the geodesic engine.
    static WarpingFunction exp_decay(double domain_max = 50.0) {
        WarpingFunction w;
        w.name_ = "exp-decay";
        w.m_ = [](double t) { return std::exp(-t); };
        w.dm_ = [](double t) { return -std::exp(-t); };
        w.d2m_ = [](double t) { return std::exp(-t); };
        w.domain_max_ = domain_max;
        w.tail_ = TailBehavior::decays_to_zero;
        w.geodesic_boundary_ = false;
        w.validate(/*require_geodesic_boundary=*/false);
        return w;
    }

    /// m(t) = cos(t), truncated strictly inside (0, pi/2) so m stays positive.
    static WarpingFunction cos_truncated(double domain_max = 1.2) {
        if (!(domain_max > 0 && domain_max < std::acos(-1.0) / 2))
            throw std::invalid_argument("cos_truncated: domain_max must lie in (0, pi/2)");
        return WarpingFunction(
            "cos-truncated", [](double t) { return std::cos(t); },
            [](double t) { return -std::sin(t); }, [](double t) { return -std::cos(t); },
            domain_max, TailBehavior::unknown);
    }

    /// Clamped cubic spline (m'(0) = 0, natural right end) through sampled
    /// (t, m(t)) pairs; domain_max is the last sample abscissa.
    static WarpingFunction from_samples(std::vector<std::pair<double, double>> table,
                                        TailBehavior tail = TailBehavior::unknown,
                                        std::string name = "spline");

    static WarpingFunction from_csv(const std::filesystem::path& path,
                                    TailBehavior tail = TailBehavior::unknown);

private:
    WarpingFunction() = default;

    static double eval_reflected(const Fn& m, double domain_max, double t) {
        if (t < 0) return m(-t);
        if (t > domain_max) return m(2 * domain_max - t);
        return m(t);
    }

    void validate(bool require_geodesic_boundary) {
        if (!(domain_max_ > 0)) throw std::invalid_argument("domain_max must be positive");
        if (std::abs(m_(0.0) - 1.0) > 1e-12)
            throw std::invalid_argument(name_ + ": m(0) must equal 1");
        if (require_geodesic_boundary && std::abs(dm_(0.0)) > 1e-12)
            throw std::invalid_argument(name_ + ": m'(0) must vanish (totally geodesic boundary)");
        const int n = 512;
        for (int i = 0; i <= n; ++i) {
            const double t = domain_max_ * i / n;
            if (!(m_(t) > 0))
                throw std::invalid_argument(name_ + ": m must stay positive on [0, domain_max]");
        }
        // d2m vs central differences of dm
        for (int i = 1; i < 32; ++i) {
            const double t = domain_max_ * i / 32.0;
            const double h = 1e-4 * std::max(1.0, t);
            if (t - h < 0 || t + h > domain_max_) continue;
            const double fd = (dm_(t + h) - dm_(t - h)) / (2 * h);
            const double ref = d2m_(t);
            if (std::abs(fd - ref) > std::max(1e-4 * std::abs(ref), 1e-5))
                throw std::invalid_argument(name_ + ": d2m inconsistent with dm");
        }
    }

    std::string name_;
    Fn m_, dm_, d2m_;
    double domain_max_ = 0.0;
    TailBehavior tail_ = TailBehavior::unknown;
    bool geodesic_boundary_ = true;
};

/// Radial (Gaussian) curvature of the model, G(t) = -m''(t)/m(t).
inline double gaussian_curvature(const WarpingFunction& w, double t) {
    if (t < 0 || t > w.domain_max())
        throw std::domain_error("gaussian_curvature: t outside [0, domain_max]");
    return -w.d2m(t) / w.m(t);
}

namespace detail {

/// Cubic spline with clamped left end (slope 0) and natural right end.
struct CubicSpline {
    std::vector<double> t, a, b, c, d; // piece i: a + b dx + c dx^2 + d dx^3

    static std::shared_ptr<CubicSpline> build(const std::vector<std::pair<double, double>>& pts) {
        const std::size_t n = pts.size();
        if (n < 3) throw std::invalid_argument("spline needs at least 3 samples");
        auto sp = std::make_shared<CubicSpline>();
        sp->t.resize(n);
        std::vector<double> y(n), h(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            sp->t[i] = pts[i].first;
            y[i] = pts[i].second;
            if (i && !(sp->t[i] > sp->t[i - 1]))
                throw std::invalid_argument("spline abscissae must be strictly increasing");
        }
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = sp->t[i + 1] - sp->t[i];
        // solve for second derivatives M_i; clamped left (y'(t0) = 0), natural right
        std::vector<double> diag(n), off(n), rhs(n);
        diag[0] = 2 * h[0];
        off[0] = h[0];
        rhs[0] = 6 * ((y[1] - y[0]) / h[0] - 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i] = 2 * (h[i - 1] + h[i]);
            off[i] = h[i];
            rhs[i] = 6 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        diag[n - 1] = 1;
        off[n - 1] = 0;
        rhs[n - 1] = 0;
        // Thomas algorithm (last row has zero sub-diagonal coupling)
        std::vector<double> cp(n), dp(n);
        cp[0] = off[0] / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double sub = (i + 1 == n) ? 0.0 : h[i - 1];
            const double denom = diag[i] - sub * cp[i - 1];
            cp[i] = (i + 1 < n ? off[i] : 0.0) / denom;
            dp[i] = (rhs[i] - sub * dp[i - 1]) / denom;
        }
        std::vector<double> M(n);
        M[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) M[i] = dp[i] - cp[i] * M[i + 1];

        sp->a.resize(n - 1);
        sp->b.resize(n - 1);
        sp->c.resize(n - 1);
        sp->d.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            sp->a[i] = y[i];
            sp->c[i] = M[i] / 2;
            sp->d[i] = (M[i + 1] - M[i]) / (6 * h[i]);
            sp->b[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2 * M[i] + M[i + 1]) / 6;
        }
        return sp;
    }

    std::size_t piece(double x) const {
        if (x <= t.front()) return 0;
        if (x >= t.back()) return t.size() - 2;
        auto it = std::upper_bound(t.begin(), t.end(), x);
        return static_cast<std::size_t>(it - t.begin()) - 1;
    }
    double eval(double x) const {
        const auto i = piece(x);
        const double dx = x - t[i];
        return a[i] + dx * (b[i] + dx * (c[i] + dx * d[i]));
    }
    double deriv(double x) const {
        const auto i = piece(x);
        const double dx = x - t[i];
        return b[i] + dx * (2 * c[i] + 3 * dx * d[i]);
    }
    double deriv2(double x) const {
        const auto i = piece(x);
        const double dx = x - t[i];
        return 2 * c[i] + 6 * dx * d[i];
    }
};

} // namespace detail

inline WarpingFunction WarpingFunction::from_samples(std::vector<std::pair<double, double>> table,
                                                     TailBehavior tail, std::string name) {
    auto sp = detail::CubicSpline::build(table);
    const double dmax = sp->t.back();
    return WarpingFunction(
        std::move(name), [sp](double t) { return sp->eval(t); },
        [sp](double t) { return sp->deriv(t); }, [sp](double t) { return sp->deriv2(t); }, dmax,
        tail);
}

inline WarpingFunction WarpingFunction::from_csv(const std::filesystem::path& path,
                                                 TailBehavior tail) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open warping table: " + path.string());
    std::vector<std::pair<double, double>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t, m;
        if (ls >> t >> m) table.emplace_back(t, m);
    }
    return from_samples(std::move(table), tail, "spline:" + path.filename().string());
}

} // namespace gcomp
