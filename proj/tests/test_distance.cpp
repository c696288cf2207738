#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gcomp/distance.hpp"
#include "gcomp/suites.hpp"

using namespace gcomp;

TEST_CASE("flat distances match the Euclidean oracle") {
    auto flat = WarpingFunction::constant();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0.05, 3.0), uy(-2.0, 2.0);
    for (int i = 0; i < 15; ++i) {
        ModelPoint p{ux(rng), uy(rng)}, q{ux(rng), uy(rng)};
        auto d = model_distance(flat, p, q);
        CHECK(d.length == Catch::Approx(std::hypot(q.x - p.x, q.y - p.y)).margin(1e-8));
        // path endpoints
        CHECK(d.path.front().x == Catch::Approx(p.x).margin(1e-8));
        CHECK(d.path.back().x == Catch::Approx(q.x).margin(1e-8));
        CHECK(d.path.back().y == Catch::Approx(q.y).margin(1e-8));
    }
}

TEST_CASE("cosh distances match the closed-form oracle") {
    auto hyp = WarpingFunction::hyperbolic();
    const ModelPoint p{1.0, 0.0}, q{1.0, 1.0};
    auto d = model_distance(hyp, p, q);
    CHECK(d.length == Catch::Approx(suites::hyperbolic_distance_oracle(p, q)).margin(1e-8));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ux(0.05, 2.5), uy(0.1, 2.5);
    for (int i = 0; i < 10; ++i) {
        ModelPoint a{ux(rng), 0.0}, b{ux(rng), uy(rng)};
        auto r = model_distance(hyp, a, b);
        CHECK(r.length == Catch::Approx(suites::hyperbolic_distance_oracle(a, b)).margin(1e-7));
    }
}

TEST_CASE("vertical and boundary pairs are handled exactly") {
    auto hyp = WarpingFunction::hyperbolic();
    CHECK(model_distance(hyp, {0.5, 1.0}, {2.0, 1.0}).length == Catch::Approx(1.5));
    CHECK(model_distance(hyp, {2.0, 1.0}, {0.5, 1.0}).length == Catch::Approx(1.5));
    CHECK(model_distance(hyp, {1.0, 2.0}, {1.0, 2.0}).length == 0.0);
    // boundary-to-boundary: the boundary geodesic wins for m >= 1
    auto d = model_distance(hyp, {0.0, 0.0}, {0.0, 3.0});
    CHECK(d.length == Catch::Approx(3.0).margin(1e-9));
    // boundary distance is the height
    CHECK(model_distance(hyp, {0.0, 0.5}, {1.3, 0.5}).length == Catch::Approx(1.3));
}

TEST_CASE("orientation symmetry") {
    auto hyp = WarpingFunction::hyperbolic();
    auto fwd = model_distance(hyp, {0.7, 0.0}, {1.4, 1.1});
    auto rev = model_distance(hyp, {1.4, 1.1}, {0.7, 0.0});
    auto refl = model_distance(hyp, {0.7, 2.0}, {1.4, 0.9});
    CHECK(fwd.length == Catch::Approx(rev.length).margin(1e-10));
    CHECK(fwd.length == Catch::Approx(refl.length).margin(1e-10));
}

TEST_CASE("conjugate point on the positively curved boundary geodesic") {
    auto cosw = WarpingFunction::cos_truncated(1.2);
    // along the boundary geodesic the normal Jacobi equation is J'' + J = 0,
    // so the first conjugate point sits at arc length pi
    auto hit = first_conjugate_point(cosw, {{0.0, 0.0}, kPi / 2}, 4.0, -10.0, 10.0);
    REQUIRE(hit.has_value());
    CHECK(hit->s == Catch::Approx(kPi).margin(1e-6));
    // flat model: no conjugate points anywhere
    auto flat = WarpingFunction::constant();
    CHECK_FALSE(first_conjugate_point(flat, {{1.0, 0.0}, 1.0}, 15.0, -100.0, 100.0).has_value());
}

TEST_CASE("sector probe finds no violation on nonpositive curvature") {
    for (const auto& w : {WarpingFunction::constant(), WarpingFunction::hyperbolic()}) {
        auto rep = sector_cut_pair_probe(w, 2.0, 12, 5);
        CHECK(rep.verdict == ProbeVerdict::no_violation_found);
    }
}

TEST_CASE("sector probe flags the positively curved model") {
    auto cosw = WarpingFunction::cos_truncated(1.2);
    auto rep = sector_cut_pair_probe(cosw, 4.0, 12, 5);
    CHECK(rep.verdict == ProbeVerdict::violation);
    CHECK(rep.n_conjugate >= 1);
}
