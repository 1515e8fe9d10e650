#include <gtest/gtest.h>

#include <random>

#include "bmforge/generators.hpp"
#include "bmforge/polygon.hpp"
#include "oracles.hpp"

using namespace bmforge;

TEST(ConvexHull, SquareIsAlreadyAHull) {
    ConvexPolygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    ASSERT_EQ(sq.size(), 4u);
    EXPECT_TRUE(same_vertex_set(sq, ConvexPolygon({{0, 1}, {1, 1}, {1, 0}, {0, 0}}), 0.0));
    EXPECT_GT(signed_area(sq.vertices()), 0.0);
}

TEST(ConvexHull, InteriorPointDropped) {
    ConvexPolygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
    EXPECT_EQ(sq.size(), 4u);
}

TEST(ConvexHull, CollinearVerticesCanonicalized) {
    ConvexPolygon sq({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}});
    EXPECT_EQ(sq.size(), 4u);
}

TEST(ConvexHull, DegenerateInputs) {
    auto code_of = [](std::vector<Point> pts) {
        try {
            ConvexPolygon p(std::move(pts));
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ParseError;
    };
    EXPECT_EQ(code_of({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), ErrorCode::DegenerateInput);
    EXPECT_EQ(code_of({{0, 0}, {1, 1}}), ErrorCode::DegenerateInput);
    EXPECT_EQ(code_of({{0, 0}, {0, 0}, {1, 1}}), ErrorCode::DegenerateInput);
}

TEST(ConvexHull, MatchesBruteForceExtremePoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Point> pts(50);
        for (auto& p : pts) p = {u(rng), u(rng)};
        const ConvexPolygon hull(pts);
        const auto extreme = oracle::brute_force_extreme_points(pts);
        ASSERT_EQ(hull.size(), extreme.size());
        for (const auto& e : extreme) {
            bool found = false;
            for (const auto& v : hull.vertices()) found |= (v == e);
            EXPECT_TRUE(found);
        }
        for (const auto& p : pts) EXPECT_TRUE(contains_point(hull, p, 1e-12));
    }
}

TEST(Polar, SquareToDiamond) {
    const auto diamond = polar(gen::unit_square());
    EXPECT_TRUE(same_vertex_set(diamond, ConvexPolygon({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), 1e-12));
}

TEST(Polar, TriangleMatchesHalfPlaneIntersection) {
    ConvexPolygon tri({{2, 0}, {0, 2}, {-1, -1}});
    const auto expected = oracle::half_plane_intersection(tri.vertices());
    EXPECT_TRUE(same_vertex_set(polar(tri), ConvexPolygon(expected), 1e-9));
}

TEST(Polar, OriginMustBeInterior) {
    ConvexPolygon off({{1, 1}, {2, 1}, {1, 2}});
    try {
        polar(off);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OriginNotInterior);
    }
    // origin on the boundary is also rejected
    EXPECT_THROW(polar(ConvexPolygon({{0, 0}, {1, 0}, {0, 1}})), Error);
}

TEST(Polar, Bipolarity) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto p = gen::random_convex(rng, 3 + i % 6);
        EXPECT_TRUE(same_vertex_set(polar(polar(p)), p, 1e-9));
    }
}

TEST(Support, TieGoesToLowestIndex) {
    const auto sq = gen::unit_square();
    const auto s = support(sq, {1, 0});
    EXPECT_DOUBLE_EQ(s.value, 1.0);
    EXPECT_EQ(s.argmax, (Point{1, -1}));
}

TEST(Support, HomogeneityAndTranslation) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto p = gen::random_convex(rng, 5);
        const Direction d{u(rng), u(rng)};
        const Point t{u(rng), u(rng)};
        EXPECT_NEAR(support(p, d.scaled(2.0)).value, 2.0 * support(p, d).value, 1e-12);
        EXPECT_NEAR(support(translate(p, t), d).value, support(p, d).value + dot(t, d), 1e-12);
        double scan = -1e300;
        for (const auto& v : p.vertices()) scan = std::max(scan, v.x * d.dx + v.y * d.dy);
        EXPECT_EQ(support(p, d).value, scan);
    }
}

TEST(Contains, BasicCases) {
    const auto sq = gen::unit_square();
    EXPECT_TRUE(contains(sq, sq, 0.0));
    EXPECT_FALSE(contains(sq, scaled(sq, 2.0), 1e-9));
    EXPECT_TRUE(contains(scaled(sq, 2.0), sq, 0.0));
}

TEST(Contains, MatchesOrientationOracle) {
    std::mt19937_64 rng(5);
    int agree = 0;
    for (int i = 0; i < 300; ++i) {
        const auto a = gen::random_convex(rng, 4 + i % 4);
        const auto b = apply_affine(AffineMap::scaling(0.4 + 0.01 * (i % 80)), gen::random_convex(rng, 3 + i % 5));
        EXPECT_EQ(contains(a, b, 0.0), oracle::contains_by_orientation(a, b));
        ++agree;
    }
    EXPECT_EQ(agree, 300);
}

TEST(ApplyAffine, IdentityAndCentralSymmetry) {
    const auto sq = gen::unit_square();
    EXPECT_TRUE(same_vertex_set(apply_affine(AffineMap::identity(), sq), sq, 0.0));
    const auto neg = apply_affine(AffineMap::scaling(-1.0), sq);
    EXPECT_TRUE(same_vertex_set(neg, sq, 0.0));
    EXPECT_THROW(apply_affine(AffineMap::linear(1, 2, 2, 4), sq), Error);
}

TEST(ApplyAffine, AreaScalesWithDeterminant) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const auto p = gen::random_convex(rng, 3 + i % 7);
        const auto t = gen::random_affine(rng);
        const auto image = apply_affine(t, p);
        EXPECT_GT(signed_area(image.vertices()), 0.0);
        EXPECT_NEAR(oracle::fan_area(image), std::abs(t.det()) * oracle::fan_area(p), 1e-12);
    }
}

TEST(ApplyAffine, Composes) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const auto p = gen::random_convex(rng, 6);
        const auto t1 = gen::random_affine(rng), t2 = gen::random_affine(rng);
        EXPECT_TRUE(same_vertex_set(apply_affine(t1, apply_affine(t2, p)), apply_affine(t1.compose(t2), p), 1e-9));
        EXPECT_LT(t1.compose(t1.inverse()).max_abs_diff(AffineMap::identity()), 1e-12);
    }
}

TEST(ApplyAffine, FromTriangles) {
    const Point src[3] = {{0, 0}, {1, 0}, {0, 1}};
    const Point dst[3] = {{1, 1}, {3, 1}, {1, 4}};
    const auto m = AffineMap::from_triangles(src, dst);
    for (int i = 0; i < 3; ++i) EXPECT_LT(distance(m(src[i]), dst[i]), 1e-14);
}

TEST(Area, KnownValues) {
    EXPECT_DOUBLE_EQ(area(ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})), 1.0);
    EXPECT_DOUBLE_EQ(area(ConvexPolygon({{0, 0}, {1, 0}, {0, 1}})), 0.5);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto p = gen::random_convex(rng, 8);
        EXPECT_NEAR(area(p), oracle::fan_area(p), 1e-13);
    }
}

TEST(ScaleNegate, Cases) {
    const auto tri = gen::triangle();
    EXPECT_TRUE(same_vertex_set(scale_negate(tri, -1.0, {}), tri, 1e-15));
    const auto big = scale_negate(tri, 2.0, {});
    for (const auto& u : tri.vertices()) {
        bool found = false;
        for (const auto& v : big.vertices()) found |= distance(v, -2.0 * u) < 1e-14;
        EXPECT_TRUE(found);
    }
    EXPECT_NEAR(area(scale_negate(tri, 3.0, {0.5, 0.2})), 9.0 * area(tri), 1e-12);
}

TEST(Duality, ReversesInclusion) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto l = gen::random_convex(rng, 5);
        const auto k = apply_affine(AffineMap::scaling(0.3), gen::random_convex(rng, 4));
        if (!contains(l, k, 0.0)) continue;
        EXPECT_TRUE(contains(polar(k), polar(l), 1e-9));
    }
}

TEST(Symmetry, CenterDetection) {
    const auto hex = translate(gen::regular_polygon(6), {0.3, -0.2});
    const auto c = symmetry_center(hex, 1e-9);
    ASSERT_TRUE(c.has_value());
    EXPECT_NEAR(c->x, 0.3, 1e-12);
    EXPECT_FALSE(symmetry_center(gen::triangle(), 1e-9).has_value());
    EXPECT_FALSE(symmetry_center(gen::regular_polygon(5), 1e-9).has_value());
}

TEST(HullDistance, DegenerateSets) {
    const std::vector<Point> seg{{-1, 0}, {1, 0}};
    EXPECT_DOUBLE_EQ(hull_distance({0, 0}, seg), 0.0);
    EXPECT_DOUBLE_EQ(hull_distance({0, 2}, seg), 2.0);
    const std::vector<Point> single{{1, 1}};
    EXPECT_DOUBLE_EQ(hull_distance({1, 2}, single), 1.0);
    const std::vector<Point> tri{{0, 0}, {1, 0}, {0, 1}};
    EXPECT_DOUBLE_EQ(hull_distance({0.2, 0.2}, tri), 0.0);
    EXPECT_NEAR(hull_distance({1, 1}, tri), std::sqrt(0.5), 1e-15);
}
