#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "bmforge/io.hpp"
#include "bmforge/replay.hpp"
#include "bmforge/scenario.hpp"
#include "oracles.hpp"

using namespace bmforge;
using namespace bmforge::scenario;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ParseError;
}

// -2K built vertex by vertex, independent of scale_negate.
ConvexPolygon minus_two(const ConvexPolygon& k) {
    std::vector<Point> pts;
    for (const auto& p : k.vertices()) pts.push_back({-2.0 * p.x, -2.0 * p.y});
    return ConvexPolygon(pts);
}

bool nested(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol) {
    for (const auto& q : inner.vertices())
        if (!oracle::point_inside(outer, q, tol)) return false;
    return true;
}

std::filesystem::path data_dir() { return BMFORGE_DATA_DIR; }

}  // namespace

TEST(Frame, ChainHoldsOnFixtures) {
    const auto f = Frame::standard();
    EXPECT_NEAR(oracle::fan_area(f.abc()), 3.0 * std::sqrt(3.0), 1e-12);
    EXPECT_TRUE(build_case1_frame().passed());
    EXPECT_TRUE(build_case1_frame(fixtures::case1c_k(), fixtures::case1c_l()).passed());
    for (const auto& [k, l] : {std::pair{fixtures::case1b_k(), fixtures::case1b_l()},
                               std::pair{fixtures::case1c_k(), fixtures::case1c_l()}}) {
        EXPECT_TRUE(oracle::contains_by_orientation(l, k));
        EXPECT_TRUE(nested(minus_two(k), l, 1e-12));
        EXPECT_TRUE(nested(f.abc(), l, 1e-12));
    }
}

TEST(Frame, BrokenChainNamesTheInclusion) {
    EXPECT_EQ(code_of([] { build_case1_frame(gen::unit_square()); }), ErrorCode::ChainViolated);
    try {
        build_case1_frame(fixtures::case1b_k(), ConvexPolygon({{-3, -3}, {3, -3}, {3, 3}, {-3, 3}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("L in abc"), std::string::npos);
    }
}

TEST(Case1a, TriangleIsTerminal) {
    const auto rep = case1a();
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.values.at("contacts"), 3.0);
}

TEST(Case1bStretch, FactorMatchesClosedForm) {
    for (double eps : {0.001, 0.005, 0.02, 0.05}) {
        const auto rep = case1b_stretch(fixtures::case1b_k(), fixtures::case1b_l(), eps);
        const double margin_only = 1.0 + eps + eps / 75.0;
        const double cover = (1.0 - eps) / (1.0 - 2.0 * eps);
        EXPECT_NEAR(rep.values.at("f"), std::max(margin_only, cover), 1e-12) << eps;
        EXPECT_NEAR(rep.values.at("det"), std::max(margin_only, cover) * (1.0 - eps), 1e-12);
    }
}

TEST(Case1bStretch, PerturbedBodyIsSandwiched) {
    const auto k = fixtures::case1b_k();
    for (double eps : {0.001, 0.01, 0.02, 0.05}) {
        const auto rep = case1b_stretch(k, fixtures::case1b_l(), eps);
        ASSERT_TRUE(rep.passed()) << eps;
        const auto& lp = *rep.body("L'");
        EXPECT_TRUE(nested(lp, k, 1e-9));
        EXPECT_TRUE(nested(minus_two(k), lp, 1e-9));
        // the images of u1 and u2 leave abc across two different sides
        const auto abc = Frame::standard().abc();
        int outside = 0;
        for (const auto& v : lp.vertices()) outside += oracle::point_inside(abc, v, 0.0) ? 0 : 1;
        EXPECT_GE(outside, 2);
    }
}

TEST(Case1bStretch, ZeroEpsilonIsIdentity) {
    const auto rep = case1b_stretch(fixtures::case1b_k(), fixtures::case1b_l(), 0.0);
    EXPECT_TRUE(rep.passed());
    EXPECT_NEAR(rep.values.at("f"), 1.0, 1e-15);
    EXPECT_TRUE(same_vertex_set(*rep.body("L'"), fixtures::case1b_l(), 1e-12));
}

TEST(Case1bStretch, RejectsBadEpsilon) {
    EXPECT_EQ(code_of([] { case1b_stretch(fixtures::case1b_k(), fixtures::case1b_l(), 0.3); }),
              ErrorCode::EpsilonTooLarge);
    EXPECT_EQ(code_of([] { case1b_stretch(fixtures::case1b_k(), fixtures::case1b_l(), -0.01); }),
              ErrorCode::PreconditionViolated);
}

TEST(Case1bShift, Preconditions) {
    EXPECT_TRUE(case1b_shift_stretch(0.05, 0.8, 2000).passed());
    EXPECT_TRUE(case1b_shift_stretch(0.0, 0.5, 500).passed());
    EXPECT_EQ(code_of([] { case1b_shift_stretch(0.05, 0.0); }), ErrorCode::PreconditionViolated);
    EXPECT_EQ(code_of([] { case1b_shift_stretch(0.05, 1.0); }), ErrorCode::PreconditionViolated);
    EXPECT_EQ(code_of([] { case1b_shift_stretch(0.1, 0.8); }), ErrorCode::PreconditionViolated);
    EXPECT_EQ(code_of([] { case1b_shift_stretch(-0.01, 0.8); }), ErrorCode::PreconditionViolated);
}

TEST(Case1c, TrapezoidMapKeepsSandwich) {
    const auto k = fixtures::case1c_k();
    for (double eps : {0.001, 0.01, 0.02}) {
        const auto rep = case1c_trapezoid_map(k, fixtures::case1c_l(), eps);
        ASSERT_TRUE(rep.passed()) << eps;
        const auto& lp = *rep.body("L'");
        EXPECT_TRUE(nested(lp, k, 1e-9));
        EXPECT_TRUE(nested(minus_two(k), lp, 1e-9));
        EXPECT_NEAR(oracle::fan_area(lp), area(lp), 1e-12);
    }
}

TEST(Case2a, SquareInDiamond) {
    const auto rep = case2a();
    EXPECT_TRUE(rep.passed());
    EXPECT_TRUE(oracle::contains_by_orientation(fixtures::case2a_l(), fixtures::case2a_k()));
}

TEST(Case2b, PerturbationRemovesContacts) {
    const Case2bConfig cfg;
    const auto k = cfg.k;
    for (double eps : {0.001, 0.01, 0.05}) {
        const auto rep = case2b_trapezoid_perturb(cfg, eps);
        ASSERT_TRUE(rep.passed()) << eps;
        const auto& lp = *rep.body("L'");
        EXPECT_TRUE(nested(lp, k, 1e-9));
        const auto big = minus_two(k);
        for (const auto& v : lp.vertices()) EXPECT_TRUE(oracle::point_inside(big, v, -1e-9));
    }
    EXPECT_EQ(code_of([&] { case2b_trapezoid_perturb(cfg, 0.5); }), ErrorCode::EpsilonTooLarge);
    EXPECT_EQ(code_of([&] { case2b_trapezoid_perturb(cfg, -1e-3); }), ErrorCode::PreconditionViolated);
}

TEST(Case3, ParallelogramDeduction) {
    EXPECT_TRUE(case3().passed());
    const auto sq = gen::unit_square();
    EXPECT_TRUE(case3_parallelogram_deduction(sq, sq[0], sq[1], sq[2], sq[3]).passed());
    const auto hex = gen::regular_polygon(6);
    const auto rep = case3_parallelogram_deduction(hex, hex[0], hex[1], hex[3], hex[4]);
    EXPECT_FALSE(rep.assertion("L = conv{x1, x2, x3, x4}")->passed);
    EXPECT_TRUE(rep.assertion("o is the midpoint of [x1, x3]")->passed);
    const auto tri = gen::triangle();
    EXPECT_EQ(code_of([&] { case3_parallelogram_deduction(tri, tri[0], tri[1], tri[2], tri[0]); }),
              ErrorCode::NotSymmetric);
}

TEST(Replay, EveryCommittedScenarioPasses) {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir() / "scenarios")) {
        const auto rep = run_scenario(io::read_json(entry.path().string()));
        EXPECT_TRUE(rep.passed()) << entry.path();
        EXPECT_TRUE(scenario_ids().count(rep.id));
        ++seen;
    }
    EXPECT_EQ(seen, static_cast<int>(scenario_ids().size()));
}

TEST(Replay, CommittedBodiesMatchFixtures) {
    const auto b = io::read_json((data_dir() / "scenarios" / "case1b_stretch.json").string());
    EXPECT_TRUE(same_vertex_set(io::polygon_from_json(b["bodies"]["K"]), fixtures::case1b_k(), 1e-15));
    EXPECT_TRUE(same_vertex_set(io::polygon_from_json(b["bodies"]["L"]), fixtures::case1b_l(), 1e-15));
    const auto c = io::read_json((data_dir() / "scenarios" / "case1c.json").string());
    EXPECT_TRUE(same_vertex_set(io::polygon_from_json(c["bodies"]["K"]), fixtures::case1c_k(), 1e-15));
    EXPECT_TRUE(same_vertex_set(io::polygon_from_json(c["bodies"]["L"]), fixtures::case1c_l(), 1e-15));
}

TEST(Replay, ThresholdCoversGrid) {
    const auto rep = run_scenario(io::parse(R"({"id": "case1b_stretch", "parameters": {"epsilon": 0.01}})"));
    const double eps0 = rep.values.at("epsilon0");
    EXPECT_GT(eps0, 0.0);
    EXPECT_TRUE(rep.assertion("all assertions pass on (0, epsilon0]")->passed);
    for (int i = 1; i <= 5; ++i)
        EXPECT_TRUE(case1b_stretch(fixtures::case1b_k(), fixtures::case1b_l(), eps0 * i / 5.0).passed());
}

TEST(Replay, Errors) {
    EXPECT_EQ(code_of([] { run_scenario(io::parse(R"({"id": "case9"})")); }), ErrorCode::UnknownScenario);
    EXPECT_EQ(code_of([] { run_scenario(io::parse(R"({"parameters": {}})")); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { run_scenario(io::parse(R"({"id": "case1a", "parameters": {"epsilon": 0.1}})")); }),
              ErrorCode::ParameterOutOfRange);
    EXPECT_EQ(code_of([] { run_scenario(io::parse(R"({"id": "case2b", "parameters": {"epsilon": 0.7}})")); }),
              ErrorCode::ParameterOutOfRange);
    EXPECT_EQ(code_of([] { run_scenario(io::parse(R"({"id": "case1c", "bodies": {"M": null}})")); }),
              ErrorCode::ParameterOutOfRange);
    EXPECT_EQ(code_of([] { run_scenario(io::parse(R"({"id": "case1c", "parameters": {"epsilon": "x"}})")); }),
              ErrorCode::ParameterOutOfRange);
}

TEST(Replay, ReportJsonIsDeterministic) {
    const auto j = io::parse(R"({"id": "case1c", "parameters": {"epsilon": 0.02}})");
    EXPECT_EQ(io::to_json(run_scenario(j, 3)).dump(), io::to_json(run_scenario(j, 3)).dump());
    const auto p = io::parse(R"({"id": "remark_pentagon"})");
    EXPECT_EQ(io::to_json(run_scenario(p, 5)).dump(), io::to_json(run_scenario(p, 5)).dump());
}
