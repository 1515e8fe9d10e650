#include <gtest/gtest.h>

#include <random>
#include <string>

#include "bmforge/generators.hpp"
#include "bmforge/io.hpp"
#include "bmforge/svg.hpp"

using namespace bmforge;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::DegenerateInput;
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(Json, PolygonRoundTripIsExact) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const auto p = gen::random_convex(rng, 3 + i % 8);
        const auto q = io::polygon_from_json(io::parse(io::to_json(p).dump()));
        ASSERT_EQ(p.size(), q.size());
        for (std::size_t v = 0; v < p.size(); ++v) {
            EXPECT_EQ(p[v].x, q[v].x);
            EXPECT_EQ(p[v].y, q[v].y);
        }
    }
}

TEST(Json, PolygonTakesHullOfUnorderedInput) {
    const auto p = io::polygon_from_json(io::parse(R"({"vertices": [[1,1],[-1,-1],[1,-1],[0,0],[-1,1]]})"));
    EXPECT_EQ(p.size(), 4u);
    EXPECT_NEAR(area(p), 4.0, 1e-15);
}

TEST(Json, AffineRoundTrip) {
    const AffineMap m{1.5, -0.25, 0.125, 2.0, 3.0, -4.0};
    const auto n = io::affine_from_json(io::parse(io::to_json(m).dump()));
    EXPECT_EQ(m.m11, n.m11);
    EXPECT_EQ(m.m12, n.m12);
    EXPECT_EQ(m.m21, n.m21);
    EXPECT_EQ(m.m22, n.m22);
    EXPECT_EQ(m.t1, n.t1);
    EXPECT_EQ(m.t2, n.t2);
    const auto lin = io::affine_from_json(io::parse(R"({"linear": [[1, 0], [0, 1]]})"));
    EXPECT_EQ(lin.t1, 0.0);
}

TEST(Json, DistanceReportRoundTrip) {
    DistanceReport r;
    r.r = 2.118033988749895;
    r.sign = -1;
    r.map = {0.5, 0.1, -0.2, 0.7, 0.01, -0.02};
    r.shift_inner = {0.1, 0.2};
    r.shift_outer = {-0.3, 0.4};
    r.verified = true;
    r.restarts_used = 7;
    r.objective_history = {3.0, 2.5, 2.118033988749895};
    const auto wrapped = io::json{{"report", io::to_json(r)}};
    const auto s = io::distance_report_from_json(io::parse(wrapped.dump()));
    EXPECT_EQ(io::to_json(s).dump(), io::to_json(r).dump());
}

TEST(Json, CertificateRoundTrip) {
    JohnCertificate c;
    const auto tri = gen::triangle();
    for (const auto& u : tri.vertices()) {
        c.pairs.push_back({u, Direction::from(u)});
        c.weights.push_back(2.0 / 3.0);
    }
    c.recenter = {0.25, -0.5};
    const auto d = io::certificate_from_json(io::parse(io::json{{"certificate", io::to_json(c)}}.dump()));
    EXPECT_EQ(io::to_json(c).dump(), io::to_json(d).dump());
}

TEST(Json, MalformedInputRaisesParseError) {
    EXPECT_EQ(code_of([] { io::parse("{\"vertices\": [[0, 0], "); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::polygon_from_json(io::parse(R"({"points": []})")); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::polygon_from_json(io::parse(R"({"vertices": [[0, "a"]]})")); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::polygon_from_json(io::parse(R"({"vertices": [[0, 1, 2]]})")); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::certificate_from_json(io::parse(R"({"pairs": [], "weights": [1]})")); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { io::read_json("/nonexistent/file.json"); }), ErrorCode::ParseError);
}

TEST(Svg, OnePathPerLayerWithDottedStrokes) {
    const std::vector<svg::Layer> layers{{"L", gen::unit_square(), svg::Stroke::Solid, "#000000"},
                                         {"K", gen::triangle(), svg::Stroke::Dotted, "#ff0000"}};
    const auto out = svg::render(layers);
    EXPECT_EQ(out.rfind("<svg", 0), 0u);
    EXPECT_NE(out.find("</svg>"), std::string::npos);
    EXPECT_EQ(count(out, "<path"), 2u);
    EXPECT_EQ(count(out, "stroke-dasharray"), 2u);  // path and legend of K
    EXPECT_EQ(out, svg::render(layers));
}

TEST(Svg, ScenarioFigureDrawsPerturbedBodySolid) {
    const auto rep = scenario::case1b_stretch(scenario::fixtures::case1b_k(), scenario::fixtures::case1b_l(), 0.02);
    const auto out = svg::render(rep);
    EXPECT_EQ(count(out, "<path"), rep.bodies.size());
    EXPECT_NE(out.find("<title>L'</title>"), std::string::npos);
    EXPECT_EQ(count(out, "<path") - count(out, "stroke-dasharray=\"2 4\" stroke-linecap"), 1u);
}
