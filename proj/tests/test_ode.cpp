#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "gcomp/ode.hpp"

using namespace gcomp;

TEST_CASE("integrator reproduces the exponential") {
    auto rhs = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = y[0];
    };
    auto r = integrate_ode<1, 0>(rhs, 0.0, {1.0}, 2.0, {}, NoEvents{}, NoStepCb{});
    REQUIRE(r.status == OdeStatus::reached_end);
    CHECK(r.y[0] == Catch::Approx(std::exp(2.0)).epsilon(1e-9));
}

TEST_CASE("integrator reproduces the harmonic oscillator") {
    auto rhs = [](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto r = integrate_ode<2, 0>(rhs, 0.0, {1.0, 0.0}, 10.0, {}, NoEvents{}, NoStepCb{});
    REQUIRE(r.status == OdeStatus::reached_end);
    CHECK(std::abs(r.y[0] - std::cos(10.0)) < 1e-8);
    CHECK(std::abs(r.y[1] + std::sin(10.0)) < 1e-8);
}

TEST_CASE("event crossings are located accurately") {
    auto rhs = [](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    // cos(s) crosses zero at pi/2
    auto ev = [](double, const std::array<double, 2>& y, std::array<double, 1>& g) {
        g[0] = y[0];
    };
    auto r = integrate_ode<2, 1>(rhs, 0.0, {1.0, 0.0}, 10.0, {}, ev, NoStepCb{});
    REQUIRE(r.status == OdeStatus::event);
    CHECK(r.event_index == 0);
    CHECK(std::abs(r.s - std::acos(-1.0) / 2) < 1e-9);
}

TEST_CASE("step callback sees a monotone grid") {
    auto rhs = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = -y[0];
    };
    double last = -1.0;
    int n = 0;
    auto cb = [&](double s, const std::array<double, 1>&) {
        CHECK(s > last - 1e-15);
        last = s;
        ++n;
    };
    auto r = integrate_ode<1, 0>(rhs, 0.0, {1.0}, 5.0, {}, NoEvents{}, cb);
    REQUIRE(r.status == OdeStatus::reached_end);
    CHECK(n >= 10);
    CHECK(last == Catch::Approx(5.0));
}
