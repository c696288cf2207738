#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gcomp/geodesic.hpp"

using namespace gcomp;

namespace {

// worst Clairaut / unit-speed drift over the stored samples
std::pair<double, double> conservation_drift(const WarpingFunction& w, const GeodesicPath& path) {
    double worst_nu = 0.0, worst_speed = 0.0;
    for (const auto& s : path.samples) {
        const double m = w.m(s.x);
        const double nu = m * m * std::abs(s.yp);
        const double speed = std::sqrt(s.xp * s.xp + m * m * s.yp * s.yp);
        worst_nu = std::max(worst_nu, std::abs(nu - path.clairaut));
        worst_speed = std::max(worst_speed, std::abs(speed - 1.0));
    }
    return {worst_nu, worst_speed};
}

} // namespace

TEST_CASE("flat geodesics are straight lines") {
    auto flat = WarpingFunction::constant();
    auto path = integrate_geodesic(flat, {{1.0, 0.0}, kPi / 4}, 2.0);
    const auto& e = path.back();
    CHECK(e.x == Catch::Approx(1.0 + 2.0 * std::cos(kPi / 4)).margin(1e-10));
    CHECK(e.y == Catch::Approx(2.0 * std::sin(kPi / 4)).margin(1e-10));
    CHECK_FALSE(path.truncated);
}

TEST_CASE("boundary geodesic stays on the boundary") {
    auto hyp = WarpingFunction::hyperbolic();
    auto path = integrate_geodesic(hyp, {{0.0, 0.0}, kPi / 2}, 5.0);
    for (const auto& s : path.samples) CHECK(std::abs(s.x) < 1e-10);
    CHECK(path.back().y == Catch::Approx(5.0).margin(1e-9));
    CHECK(path.clairaut == Catch::Approx(1.0));
}

TEST_CASE("conserved quantities hold on random geodesics") {
    auto hyp = WarpingFunction::hyperbolic();
    auto flat = WarpingFunction::constant();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.1, 2.0), ua(0.1, kPi - 0.1), ul(1.0, 10.0);
    for (int i = 0; i < 20; ++i) {
        const GeodesicState init{{ux(rng), 0.0}, ua(rng)};
        for (const auto* w : {&hyp, &flat}) {
            auto path = integrate_geodesic(*w, init, ul(rng));
            auto [dnu, dspeed] = conservation_drift(*w, path);
            CHECK(dnu <= 1e-8);
            CHECK(dspeed <= 1e-8);
        }
    }
}

TEST_CASE("turning points are crossed cleanly") {
    // launch upward-slanted in the cosh model: x dips to the turning height
    // where m = nu, then rises again
    auto hyp = WarpingFunction::hyperbolic();
    const GeodesicState init{{1.0, 0.0}, kPi - 1.2}; // descending, nu > 1
    auto path = integrate_geodesic(hyp, init, 6.0);
    const double nu = path.clairaut;
    double min_x = 1e300;
    for (const auto& s : path.samples) min_x = std::min(min_x, s.x);
    const double x_turn = std::acosh(nu); // m(x) = nu
    // sampled minimum sits slightly above the true turning height
    CHECK(min_x >= x_turn - 1e-9);
    CHECK(min_x == Catch::Approx(x_turn).margin(1e-3));
    CHECK(path.back().x > min_x + 0.5); // rose again after the turn
    auto [dnu, dspeed] = conservation_drift(hyp, path);
    CHECK(dnu <= 1e-8);
    CHECK(dspeed <= 1e-8);
}

TEST_CASE("boundary exit truncates the path") {
    auto flat = WarpingFunction::constant();
    auto path = integrate_geodesic(flat, {{0.5, 0.0}, kPi}, 2.0);
    CHECK(path.truncated);
    CHECK(path.total_length == Catch::Approx(0.5).margin(1e-9));
    CHECK(path.back().x == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("leaving the truncated domain throws") {
    auto flat = WarpingFunction::constant(1.0, 2.0);
    CHECK_THROWS_AS(integrate_geodesic(flat, {{1.0, 0.0}, 0.0}, 5.0), TruncationError);
    CHECK_THROWS_AS(integrate_geodesic(flat, {{1.0, 0.0}, 0.5}, -1.0), std::invalid_argument);
}

TEST_CASE("quadrature length matches the closed form on the flat model") {
    auto flat = WarpingFunction::constant();
    // m = 1: integral of 1/sqrt(1 - nu^2) dt
    const double nu = 0.6;
    const double expect = (2.0 - 0.5) / std::sqrt(1 - nu * nu);
    CHECK(quadrature_length(flat, nu, 0.5, 2.0) == Catch::Approx(expect).epsilon(1e-9));
    CHECK(quadrature_length(flat, 0.0, 0.5, 2.0) == Catch::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("quadrature length matches integrated arcs in the cosh model") {
    auto hyp = WarpingFunction::hyperbolic();
    const GeodesicState init{{0.5, 0.0}, 0.7};
    auto path = integrate_geodesic(hyp, init, 2.0);
    const double nu = path.clairaut;
    // monotone ascending branch: heights from 0.5 to the endpoint height
    const double q = quadrature_length(hyp, nu, 0.5, path.back().x);
    CHECK(q == Catch::Approx(2.0).margin(1e-7));
}

TEST_CASE("turning point inside the range is rejected") {
    auto hyp = WarpingFunction::hyperbolic();
    const double nu = std::cosh(1.0); // turning height 1.0
    CHECK_THROWS_AS(quadrature_length(hyp, nu, 0.5, 2.0), BranchError);
}

TEST_CASE("length lower bound basics") {
    auto hyp = WarpingFunction::hyperbolic();
    CHECK(length_lower_bound(hyp, 0.0, 1.0, 3.0) == Catch::Approx(2.0));
    CHECK(length_lower_bound(hyp, 0.7, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(length_lower_bound(hyp, 0.3, 2.0, 1.0), std::invalid_argument);
    // bound never exceeds the true branch length
    for (double nu : {0.2, 0.6, 0.9}) {
        const double lb = length_lower_bound(hyp, nu, 0.3, 1.7);
        const double len = quadrature_length(hyp, nu, 0.3, 1.7);
        CHECK(lb <= len + 1e-9);
    }
}
