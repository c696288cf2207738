#include <catch_amalgamated.hpp>

#include <cmath>

#include "gcomp/warping.hpp"

using namespace gcomp;

TEST_CASE("shipped families validate and report their curvature") {
    auto flat = WarpingFunction::constant();
    auto hyp = WarpingFunction::hyperbolic();
    auto cosw = WarpingFunction::cos_truncated(1.2);

    CHECK(flat.m(3.0) == 1.0);
    CHECK(gaussian_curvature(flat, 2.0) == 0.0);
    CHECK(gaussian_curvature(hyp, 0.7) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(gaussian_curvature(cosw, 0.5) == Catch::Approx(1.0).margin(1e-12));
    CHECK(flat.tail() == TailBehavior::bounded_above);
    CHECK(hyp.tail() == TailBehavior::grows_unbounded);
}

TEST_CASE("construction rejects bad profiles") {
    // m(0) != 1
    CHECK_THROWS_AS(WarpingFunction("bad", [](double) { return 2.0; },
                                    [](double) { return 0.0; }, [](double) { return 0.0; }, 1.0),
                    std::invalid_argument);
    // m'(0) != 0
    CHECK_THROWS_AS(WarpingFunction("bad", [](double t) { return 1.0 + t; },
                                    [](double) { return 1.0; }, [](double) { return 0.0; }, 1.0),
                    std::invalid_argument);
    // m hits zero inside the domain
    CHECK_THROWS_AS(WarpingFunction("bad", [](double t) { return std::cos(t); },
                                    [](double t) { return -std::sin(t); },
                                    [](double t) { return -std::cos(t); }, 3.0),
                    std::invalid_argument);
    // inconsistent second derivative
    CHECK_THROWS_AS(WarpingFunction("bad", [](double t) { return std::cosh(t); },
                                    [](double t) { return std::sinh(t); },
                                    [](double) { return 0.0; }, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(WarpingFunction::cos_truncated(2.0), std::invalid_argument);
}

TEST_CASE("exp-decay carries no geodesic boundary") {
    auto w = WarpingFunction::exp_decay();
    CHECK_FALSE(w.geodesic_boundary());
    CHECK(w.tail() == TailBehavior::decays_to_zero);
    CHECK(w.m(1.0) == Catch::Approx(std::exp(-1.0)));
}

TEST_CASE("numeric derivatives match analytic ones") {
    auto w = WarpingFunction::with_numeric_derivatives(
        "num-cosh", [](double t) { return std::cosh(t); }, 5.0, TailBehavior::grows_unbounded);
    for (double t : {0.0, 0.5, 1.7, 4.0}) {
        CHECK(w.dm(t) == Catch::Approx(std::sinh(t)).margin(1e-6));
        CHECK(w.d2m(t) == Catch::Approx(std::cosh(t)).margin(1e-4));
    }
}

TEST_CASE("curvature agrees with finite differences of m") {
    // gradient-check of the metric data: -m''/m vs central differences
    auto hyp = WarpingFunction::hyperbolic(10.0);
    const double h = 1e-4;
    for (double t : {0.3, 1.0, 2.5, 6.0}) {
        const double fd = (hyp.m(t + h) - 2 * hyp.m(t) + hyp.m(t - h)) / (h * h);
        const double K_fd = -fd / hyp.m(t);
        CHECK(std::abs(K_fd - gaussian_curvature(hyp, t)) <=
              1e-4 * std::max(1.0, std::abs(K_fd)));
    }
}

TEST_CASE("spline tables reproduce smooth profiles") {
    std::vector<std::pair<double, double>> table;
    for (int i = 0; i <= 200; ++i) {
        const double t = 3.0 * i / 200;
        table.emplace_back(t, std::cosh(t));
    }
    auto w = WarpingFunction::from_samples(table, TailBehavior::grows_unbounded);
    CHECK(w.domain_max() == Catch::Approx(3.0));
    for (double t : {0.1, 0.77, 1.5, 2.9})
        CHECK(w.m(t) == Catch::Approx(std::cosh(t)).epsilon(1e-6));
    CHECK(gaussian_curvature(w, 1.5) == Catch::Approx(-1.0).margin(1e-2));
}

TEST_CASE("curvature domain is enforced") {
    auto flat = WarpingFunction::constant(1.0, 2.0);
    CHECK_THROWS_AS(gaussian_curvature(flat, 3.0), std::domain_error);
    CHECK_THROWS_AS(gaussian_curvature(flat, -0.1), std::domain_error);
}
