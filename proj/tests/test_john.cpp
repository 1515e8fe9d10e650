#include <gtest/gtest.h>

#include <random>

#include "bmforge/generators.hpp"
#include "bmforge/john.hpp"
#include "bmforge/maxvol.hpp"
#include "oracles.hpp"

using namespace bmforge;

namespace {

ConvexPolygon hexagon_around(const ConvexPolygon& tri) {
    std::vector<Point> pts;
    for (const auto& u : tri.vertices()) { pts.push_back(u); pts.push_back(-u); }
    return ConvexPolygon(pts);
}

JohnCertificate equilateral_certificate() {
    JohnCertificate c;
    const auto tri = gen::triangle();
    for (const auto& u : tri.vertices()) {
        c.pairs.push_back({u, Direction::from(u)});
        c.weights.push_back(2.0 / 3.0);
    }
    fill_residuals(c);
    return c;
}

// K = [-1,1]^2 inside the diamond |x| + |y| <= 2; contacts at the square's vertices.
ConvexPolygon diamond2() { return ConvexPolygon({{2, 0}, {0, 2}, {-2, 0}, {0, -2}}); }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ParseError;
}

}  // namespace

TEST(MaxVolume, IdentityWhenBodiesCoincide) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 6; ++i) {
        const auto k = i == 0 ? gen::unit_square() : gen::random_convex(rng, 3 + i);
        const auto res = max_volume_position(k, k);
        EXPECT_NEAR(res.det, 1.0, 1e-7);
        EXPECT_TRUE(same_vertex_set(apply_affine(res.map, k), k, 1e-7));
        if (i == 0) EXPECT_LT(res.map.max_abs_diff(AffineMap::identity()), 1e-7);
    }
}

TEST(MaxVolume, TriangleInUnitSquare) {
    const ConvexPolygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const double oracle_area = oracle::max_inscribed_triangle_area(sq, 50);
    EXPECT_NEAR(oracle_area, 0.5, 1e-12);
    const auto tri = gen::triangle();
    const auto res = max_volume_position(tri, sq);
    EXPECT_NEAR(res.det * area(tri), oracle_area, 1e-7);
    EXPECT_TRUE(contains(sq, apply_affine(res.map, tri), 1e-9));
    EXPECT_LT(res.stationarity, 1e-8);
}

TEST(MaxVolume, SquareInUnitAreaTriangle) {
    const double s = std::sqrt(2.0);
    const ConvexPolygon tri({{0, 0}, {s, 0}, {0, s}});
    const double oracle_area = oracle::max_inscribed_parallelogram_area(tri, 40);
    EXPECT_NEAR(oracle_area, 0.5, 1e-12);
    const auto sq = gen::unit_square();
    const auto res = max_volume_position(sq, tri);
    EXPECT_NEAR(res.det * area(sq), oracle_area, 1e-7);
    EXPECT_TRUE(contains(tri, apply_affine(res.map, sq), 1e-9));
}

TEST(MaxVolume, AffineCovariance) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 5; ++i) {
        const auto k = gen::random_convex(rng, 3 + i % 3);
        const auto l = gen::random_convex(rng, 4 + i % 3);
        const auto s = gen::random_affine(rng);
        const double base = max_volume_position(k, l).det;
        const double moved = max_volume_position(k, apply_affine(s, l)).det;
        EXPECT_NEAR(moved, std::abs(s.det()) * base, 1e-6 * moved);
    }
}

TEST(MaxVolume, ResultFitsAndBeatsPerturbations) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        const auto k = gen::random_convex(rng, 3 + i % 4);
        const auto l = gen::random_convex(rng, 3 + (i + 1) % 5);
        const auto res = max_volume_position(k, l);
        const auto image = apply_affine(res.map, k);
        EXPECT_TRUE(contains(l, image, 1e-9));
        // any small perturbation that still fits cannot have larger area
        for (int t = 0; t < 200; ++t) {
            AffineMap p = res.map;
            p.m11 += 1e-3 * u(rng); p.m12 += 1e-3 * u(rng); p.m21 += 1e-3 * u(rng); p.m22 += 1e-3 * u(rng);
            p.t1 += 1e-3 * u(rng); p.t2 += 1e-3 * u(rng);
            if (contains(l, apply_affine(p, k), 0.0)) EXPECT_LE(std::abs(p.det()), res.det * (1 + 1e-9));
        }
    }
}

TEST(Contacts, SquareInItselfGivesExtremeRays) {
    const auto sq = gen::unit_square();
    const auto pairs = extract_contacts(sq, sq, 1e-9);
    ASSERT_EQ(pairs.size(), 8u);
    for (const auto& p : pairs) {
        EXPECT_NEAR(dot(p.u, p.v), 1.0, 1e-12);
        EXPECT_NEAR(support(sq, p.v).value, 1.0, 1e-12);
    }
}

TEST(Contacts, TriangleInHexagon) {
    const auto tri = gen::triangle();
    const auto pairs = extract_contacts(tri, hexagon_around(tri), 1e-9);
    // each triangle vertex is a hexagon vertex: two extreme rays apiece
    ASSERT_EQ(pairs.size(), 6u);
    for (const auto& p : pairs) {
        EXPECT_NEAR(dot(p.u, p.v), 1.0, 1e-12);
        EXPECT_NEAR(support(tri, p.v).value, 1.0, 1e-12);
        EXPECT_NEAR(support(hexagon_around(tri), p.v).value, 1.0, 1e-12);
    }
}

TEST(Contacts, StrictlyInside) {
    const auto sq = gen::unit_square();
    EXPECT_EQ(code_of([&] { extract_contacts(scaled(sq, 0.5), sq, 1e-9); }), ErrorCode::NoContacts);
}

TEST(Weights, EquilateralPairs) {
    std::vector<ContactPair> pairs;
    const auto tri = gen::triangle();
    for (const auto& u : tri.vertices()) pairs.push_back({u, Direction::from(u)});
    const auto a = solve_john_weights(pairs);
    ASSERT_EQ(a.size(), 3u);
    for (const double ai : a) EXPECT_NEAR(ai, 2.0 / 3.0, 1e-12);
}

TEST(Weights, SquarePairs) {
    std::vector<ContactPair> pairs;
    std::vector<Point> us, vs;
    const auto sq = gen::unit_square();
    for (const auto& u : sq.vertices()) {
        pairs.push_back({u, Direction::from(u / 2.0)});
        us.push_back(u);
        vs.push_back(u / 2.0);
    }
    const auto a = solve_john_weights(pairs);
    for (const double ai : a) EXPECT_NEAR(ai, 0.5, 1e-12);
    const auto sums = oracle::john_sums(us, vs, a);
    EXPECT_LT(sums.identity, 1e-12);
    EXPECT_NEAR(sums.total, 2.0, 1e-12);
}

TEST(Weights, HalfPlaneIsInfeasible) {
    std::vector<ContactPair> pairs{{{1, 0.2}, {1, 0}}, {{1, -0.5}, {1, 0}}, {{0.5, 1}, {0, 1}}};
    EXPECT_EQ(code_of([&] { solve_john_weights(pairs); }), ErrorCode::InfeasibleWeights);
}

TEST(Certificate, EquilateralPasses) {
    const auto cert = equilateral_certificate();
    const auto r = check_john_certificate(cert);
    EXPECT_TRUE(r.passed);
    EXPECT_TRUE(r.arity_ok);
    EXPECT_LT(r.weight_sum, 1e-12);
}

TEST(Certificate, ZeroedWeightFails) {
    auto cert = equilateral_certificate();
    cert.weights[1] = 0.0;
    const auto r = check_john_certificate(cert);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.identity, 1e-7);
}

TEST(Certificate, PerturbedPointFails) {
    auto cert = equilateral_certificate();
    cert.pairs[0].u.x += 1e-3;
    const auto r = check_john_certificate(cert);
    EXPECT_FALSE(r.passed);
    EXPECT_GE(r.worst, 1e-4);
}

TEST(Recenter, TriangleInHexagon) {
    const auto tri = gen::triangle();
    const auto res = recenter_search(tri, hexagon_around(tri));
    EXPECT_LT(norm(res.z), 1e-12);
    ASSERT_EQ(res.cert.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(distance(res.cert.pairs[i].u, res.cert.pairs[i].v.as_point()), 0.0, 1e-12);
        EXPECT_NEAR(res.cert.weights[i], 2.0 / 3.0, 1e-12);
    }
    EXPECT_TRUE(triple_pair_check(res.cert).passed);
}

TEST(Recenter, SquareInItself) {
    const auto sq = gen::unit_square();
    const auto res = recenter_search(sq, sq);
    EXPECT_LT(norm(res.z), 1e-12);
    ASSERT_EQ(res.cert.size(), 4u);
    std::vector<Point> us, vs;
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(res.cert.weights[i], 0.5, 1e-12);
        EXPECT_NEAR(distance(res.cert.pairs[i].v.as_point(), res.cert.pairs[i].u / 2.0), 0.0, 1e-12);
        us.push_back(res.cert.pairs[i].u);
        vs.push_back(res.cert.pairs[i].v.as_point());
    }
    EXPECT_LT(oracle::john_sums(us, vs, res.cert.weights).identity, 1e-12);
}

TEST(Recenter, StrictlyInteriorHasNoCertificate) {
    const auto sq = gen::unit_square();
    EXPECT_EQ(code_of([&] { recenter_search(scaled(sq, 0.9), sq); }), ErrorCode::NoCertificate);
}

TEST(Recenter, NonMaximalPositionHasNoCertificate) {
    // a thin rectangle touching both sides of the square is far from maximal
    const ConvexPolygon thin({{-1, -0.1}, {1, -0.1}, {1, 0.1}, {-1, 0.1}});
    EXPECT_EQ(code_of([&] { recenter_search(thin, gen::unit_square()); }), ErrorCode::NoCertificate);
}

TEST(Recenter, RandomMaximalPositionsCertify) {
    std::mt19937_64 rng(24);
    int three = 0;
    for (int i = 0; i < 30; ++i) {
        const auto k = gen::random_convex(rng, 3 + i % 5);
        const auto l = gen::random_convex(rng, 3 + (i / 5) % 5);
        const auto mv = max_volume_position(k, l);
        const auto image = apply_affine(mv.map, k);
        const auto res = recenter_search(image, l);
        const auto& c = res.cert;
        const auto report = check_john_certificate(c);
        EXPECT_TRUE(report.passed) << "instance " << i << " worst " << report.worst;
        EXPECT_TRUE(report.arity_ok) << "instance " << i << " m = " << c.size();

        std::vector<Point> us, vs;
        for (const auto& p : c.pairs) { us.push_back(p.u); vs.push_back(p.v.as_point()); }
        const auto sums = oracle::john_sums(us, vs, c.weights);
        EXPECT_LT(sums.identity, 1e-7);
        EXPECT_LT(sums.sum_u, 1e-7);
        EXPECT_LT(sums.sum_v, 1e-7);
        EXPECT_NEAR(sums.total, 2.0, 1e-7);

        // z lies in (2/3) K' when the origin sits at the centroid of K'
        const Point g = centroid(image);
        EXPECT_TRUE(contains_point(scaled(translate(image, -g), 2.0 / 3.0), res.z - g, 1e-9));

        // contact pairs really live on both boundaries
        const auto k0 = translate(image, -res.z), l0 = translate(l, -res.z);
        for (const auto& p : c.pairs) {
            EXPECT_NEAR(support(k0, p.v).value, 1.0, 1e-7);
            EXPECT_NEAR(support(l0, p.v).value, 1.0, 1e-7);
        }

        if (c.size() == 3) {
            ++three;
            EXPECT_TRUE(triple_pair_check(c).passed);
        }
        EXPECT_TRUE(check_glmp(image, l, c).holds);
    }
    EXPECT_GT(three, 0);
}

TEST(TriplePair, EquilateralCrossValues) {
    const auto r = triple_pair_check(equilateral_certificate());
    EXPECT_TRUE(r.passed);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.cross[i][j], i == j ? 1.0 : -0.5, 1e-12);
}

TEST(TriplePair, WrongArity) {
    const auto sq = gen::unit_square();
    const auto res = recenter_search(sq, sq);
    EXPECT_EQ(code_of([&] { triple_pair_check(res.cert); }), ErrorCode::WrongArity);
}

TEST(Glmp, TriangleInHexagon) {
    const auto tri = gen::triangle();
    const auto hex = hexagon_around(tri);
    const auto r = check_glmp(tri, hex, equilateral_certificate());
    EXPECT_TRUE(r.holds);
    ASSERT_TRUE(r.s.has_value());
    EXPECT_EQ(*r.s, 3);
    for (const auto& u : tri.vertices()) {
        bool found = false;
        for (const auto& c : r.contacts) found |= distance(c, u) < 1e-9;
        EXPECT_TRUE(found);
        EXPECT_TRUE(oracle::point_inside(scale_negate(tri, 2.0), u, 1e-12));
    }
}

TEST(Glmp, SquareMatchesEnumerationOracle) {
    const auto sq = gen::unit_square();
    const auto res = recenter_search(sq, sq);
    const auto r = check_glmp(sq, sq, res.cert);
    EXPECT_TRUE(r.holds);
    // brute force: vertices of either body lying on the other's boundary
    const auto big = scale_negate(sq, 2.0);
    int oracle_count = 0;
    for (const auto& q : sq.vertices())
        for (std::size_t e = 0; e < big.size(); ++e) oracle_count += std::abs(oracle::orient(big[e], big[e + 1], q)) < 1e-12;
    EXPECT_EQ(oracle_count, 0);
    ASSERT_TRUE(r.s.has_value());
    EXPECT_EQ(*r.s, 0);
}

TEST(Glmp, SharedSegment) {
    const auto tri = gen::triangle();
    const auto r = check_glmp(tri, scale_negate(tri, 2.0), equilateral_certificate());
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.s.has_value());
}

TEST(Glmp, PerturbedCertificate) {
    auto cert = equilateral_certificate();
    cert.pairs[1].u.y += 1e-3;
    const auto tri = gen::triangle();
    EXPECT_EQ(code_of([&] { check_glmp(tri, hexagon_around(tri), cert); }), ErrorCode::CertificateInvalid);
}

TEST(Irredundant, EquilateralUnchanged) {
    const auto cert = equilateral_certificate();
    const auto r = irredundant_pairs(cert.pairs);
    EXPECT_EQ(r.pairs.size(), 3u);
}

TEST(Irredundant, MidpointPairRemoved) {
    auto pairs = equilateral_certificate().pairs;
    const Point mid = (pairs[0].u + pairs[1].u) / 2.0;
    pairs.push_back({mid, Direction::from(mid / dot(mid, mid))});
    const auto r = irredundant_pairs(pairs);
    ASSERT_EQ(r.pairs.size(), 3u);
    for (const auto& p : r.pairs) EXPECT_GT(distance(p.u, mid), 1e-6);
}

TEST(Irredundant, SeededRedundantSetsPassHullOracle) {
    std::mt19937_64 rng(25);
    std::vector<std::vector<ContactPair>> cases;
    cases.push_back(extract_contacts(gen::unit_square(), gen::unit_square(), 1e-9));
    const auto hex = gen::regular_polygon(6);
    cases.push_back(extract_contacts(hex, hex, 1e-9));
    for (int i = 0; i < 4; ++i) {
        // certificate pairs padded with interior convex combinations
        const auto sq = gen::unit_square();
        auto pairs = recenter_search(sq, sq).cert.pairs;
        std::uniform_real_distribution<double> t(0.2, 0.8);
        const double s = t(rng);
        const Point u = s * pairs[0].u + (1 - s) * pairs[1].u;
        pairs.push_back({u, Direction::from(u / dot(u, u))});
        cases.push_back(pairs);
    }
    for (const auto& pairs : cases) {
        const auto r = irredundant_pairs(pairs);
        ASSERT_GE(r.pairs.size(), 3u);
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            std::vector<Point> us, vs;
            for (std::size_t j = 0; j < r.pairs.size(); ++j) {
                if (j == i) continue;
                us.push_back(r.pairs[j].u);
                vs.push_back(r.pairs[j].v.as_point());
            }
            EXPECT_FALSE(oracle::in_hull(r.pairs[i].u, us, 1e-9));
            EXPECT_FALSE(oracle::in_hull(r.pairs[i].v.as_point(), vs, 1e-9));
        }
        JohnCertificate c{r.pairs, r.weights, {}, 0, 0, 0};
        EXPECT_TRUE(check_john_certificate(c).passed);
    }
}

TEST(EqualityConditions, EquilateralAtVertex) {
    const auto tri = gen::triangle();
    const auto cert = equilateral_certificate();
    const Point x = tri[0];
    const auto reports = equality_conditions(tri, hexagon_around(tri), cert, x);
    ASSERT_EQ(reports.size(), 1u);
    const auto& r = reports[0];
    EXPECT_NEAR(dot(x, r.w), -2.0, 1e-12);
    EXPECT_EQ(r.setA.size(), 1u);
    EXPECT_EQ(r.setB.size(), 2u);
    EXPECT_TRUE(r.holds_convu && r.holds_convv && r.holds_xv);
    // independent hull test for (convu)
    std::vector<Point> ub;
    for (const auto i : r.setB) ub.push_back(cert.pairs[i].u);
    EXPECT_TRUE(oracle::in_hull(-x / 2.0, ub, 1e-12));
    EXPECT_FALSE(r.collinear_triple);
}

TEST(EqualityConditions, SquareInDiamond) {
    const auto sq = gen::unit_square();
    const auto res = recenter_search(sq, diamond2());
    ASSERT_EQ(res.cert.size(), 4u);
    const auto reports = equality_conditions(sq, diamond2(), res.cert, {2, 0});
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].setA.size(), 2u);
    EXPECT_TRUE(reports[0].holds_convu && reports[0].holds_convv && reports[0].holds_xv);
    EXPECT_FALSE(reports[0].collinear_triple);
}

TEST(EqualityConditions, InteriorPointRejected) {
    const auto tri = gen::triangle();
    EXPECT_EQ(code_of([&] { equality_conditions(tri, hexagon_around(tri), equilateral_certificate(), {0.1, 0.1}); }),
              ErrorCode::NotAContactPoint);
}

TEST(EqualityConditions, RedundantCertificateFlagsCollinearTriple) {
    const auto sq = gen::unit_square();
    auto cert = recenter_search(sq, diamond2()).cert;
    // split one pair in two: still a John decomposition, but not irredundant
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cert.size(); ++i)
        if (cert.pairs[i].u.x > 0) idx = i;
    cert.pairs.push_back(cert.pairs[idx]);
    cert.weights[idx] /= 2.0;
    cert.weights.push_back(cert.weights[idx]);
    ASSERT_TRUE(check_john_certificate(cert).passed);
    const auto reports = equality_conditions(sq, diamond2(), cert, {2, 0});
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].setA.size(), 3u);
    EXPECT_TRUE(reports[0].collinear_triple);
    EXPECT_LT(reports[0].collinearity_residual, 1e-9);
}

TEST(EqualityConditions, IrredundantCertificatesNeverCollinear) {
    const auto tri = gen::triangle();
    std::vector<std::pair<ConvexPolygon, ConvexPolygon>> configs{{tri, hexagon_around(tri)}, {gen::unit_square(), diamond2()}};
    for (const auto& [k, l] : configs) {
        const auto res = recenter_search(k, l);
        const auto irr = irredundant_pairs(res.cert.pairs);
        JohnCertificate c{irr.pairs, irr.weights, res.z, 0, 0, 0};
        const auto glmp = check_glmp(k, l, c);
        ASSERT_FALSE(glmp.contacts.empty());
        for (const auto& x : glmp.contacts) {
            if (std::abs(point_slack(translate(l, -res.z), x)) > 1e-9) continue;
            for (const auto& r : equality_conditions(k, l, c, x)) EXPECT_FALSE(r.collinear_triple);
        }
    }
}

TEST(DualHull, Cases) {
    std::mt19937_64 rng(26);
    const auto k = gen::random_convex(rng, 5);
    const auto same = dual_contact_hull_check(k, k);
    EXPECT_TRUE(same.holds);
    EXPECT_EQ(same.points.size(), k.size());
    const auto inside = dual_contact_hull_check(scaled(k, 0.5), k);
    EXPECT_FALSE(inside.holds);
    EXPECT_TRUE(inside.points.empty());
}
