#include <catch_amalgamated.hpp>

#include <cmath>

#include "gcomp/testbed.hpp"
#include "gcomp/triangle.hpp"

using namespace gcomp;

TEST_CASE("single-piece chain degenerates to the plain triangle") {
    auto hyp = WarpingFunction::hyperbolic();
    TriangleMeasurements t{1.0, 1.5, 1.2};
    auto tri = solve_comparison_triangle(hyp, t);
    auto got = glue_generalized_triangle(hyp, {t});
    CHECK(got.pieces.size() == 1);
    CHECK(got.hinge_angles.empty());
    CHECK(got.angle_p == Catch::Approx(tri.angle_p).margin(1e-10));
    CHECK(got.angle_q == Catch::Approx(tri.angle_q).margin(1e-10));
    CHECK(got.shortest_arc.total_length == Catch::Approx(tri.opposite_side.total_length));
    CHECK(got.vertex_q.x == Catch::Approx(tri.q.x).margin(1e-10));
}

TEST_CASE("flat two-piece chain") {
    auto flat = WarpingFunction::constant();
    std::vector<TriangleMeasurements> chain = {{1.0, 1.0, 1.5}, {1.5, 1.0, 1.0}};
    auto got = glue_generalized_triangle(flat, chain);
    REQUIRE(got.hinge_angles.size() == 1);
    CHECK(got.hinge_angles[0] <= kPi + 1e-6);
    CHECK(got.broken_length == Catch::Approx(2.0).margin(1e-8));
    CHECK(got.shortest_arc.total_length <= 2.0 + 1e-8);
    // chain inequality
    auto d = model_distance(flat, got.vertex_p, got.vertex_q);
    CHECK(std::abs(got.vertex_q.x - got.vertex_p.x) <= d.length + 1e-9);
    CHECK(d.length <= got.shortest_arc.total_length + 1e-9);
    // in the flat model the shortest arc is the straight chord
    const double chord = std::hypot(got.vertex_q.x - got.vertex_p.x,
                                    got.vertex_q.y - got.vertex_p.y);
    CHECK(got.shortest_arc.total_length == Catch::Approx(chord).margin(1e-8));
}

TEST_CASE("mismatched chain heights are rejected") {
    auto flat = WarpingFunction::constant();
    std::vector<TriangleMeasurements> chain = {{1.0, 1.0, 1.5}, {1.4, 1.0, 1.0}};
    CHECK_THROWS_AS(glue_generalized_triangle(flat, chain), std::invalid_argument);
    CHECK_THROWS_AS(glue_generalized_triangle(flat, {}), std::invalid_argument);
}

TEST_CASE("cosh chain from a subdivided flat geodesic") {
    auto flat = WarpingFunction::constant();
    auto hyp = WarpingFunction::hyperbolic();
    auto s = SyntheticSurface::half_plane(flat);
    const SurfacePoint p{1.0, 0.0}, q{1.4, 1.2};
    auto chain = subdivided_chain(s, p, q, 3);
    REQUIRE(chain.size() == 3);
    // shared heights by construction
    CHECK(chain[0].c == Catch::Approx(chain[1].a));
    CHECK(chain[1].c == Catch::Approx(chain[2].a));

    auto got = glue_generalized_triangle(hyp, chain);
    for (double h : got.hinge_angles) CHECK(h <= kPi + 1e-6);
    const double sum_b = chain[0].b + chain[1].b + chain[2].b;
    CHECK(got.broken_length == Catch::Approx(sum_b).margin(1e-7));
    auto d = model_distance(hyp, got.vertex_p, got.vertex_q);
    CHECK(std::abs(got.vertex_q.x - got.vertex_p.x) <= d.length + 1e-9);
    CHECK(d.length <= got.shortest_arc.total_length + 1e-9);
    CHECK(got.shortest_arc.total_length <= got.broken_length + 1e-9);

    // cross-check against the direct solve of the full triangle
    auto whole = extract_triangle(s, p, q);
    auto direct = solve_comparison_triangle(hyp, whole);
    CHECK(got.shortest_arc.total_length <= direct.opposite_side.total_length + 1e-6);
}

TEST_CASE("shortest arc of a single-geodesic broken side is unchanged") {
    auto hyp = WarpingFunction::hyperbolic();
    auto path = integrate_geodesic(hyp, {{1.0, 0.0}, 0.9}, 1.5);
    auto arc = shortest_arc_in_domain(hyp, {path}, {path.front().x, path.front().y},
                                      {path.back().x, path.back().y});
    CHECK(arc.total_length == Catch::Approx(1.5).margin(1e-7));
}
