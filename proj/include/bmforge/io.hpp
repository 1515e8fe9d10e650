#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bmforge/common.hpp"
#include "bmforge/distance.hpp"
#include "bmforge/john.hpp"
#include "bmforge/polygon.hpp"
#include "bmforge/scenario.hpp"

namespace bmforge::io {

using json = nlohmann::json;

namespace detail {

inline double number(const json& j, const char* what) {
    if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
    return j.get<double>();
}

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace detail

inline json to_json(const Point& p) { return json::array({p.x, p.y}); }

inline Point point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "a point is an array [x, y]");
    return {detail::number(j[0], "coordinate"), detail::number(j[1], "coordinate")};
}

inline json to_json(const ConvexPolygon& p) {
    json v = json::array();
    for (const auto& q : p.vertices()) v.push_back(to_json(q));
    return {{"vertices", v}};
}

/// {"vertices": [[x, y], ...]} in any order; the hull is taken.
inline ConvexPolygon polygon_from_json(const json& j, const Tolerances& tol = {}) {
    const json& v = detail::field(j, "vertices");
    if (!v.is_array()) throw Error(ErrorCode::ParseError, "\"vertices\" must be an array");
    std::vector<Point> pts;
    for (const auto& q : v) pts.push_back(point_from_json(q));
    return ConvexPolygon(std::move(pts), tol.geom);
}

inline json to_json(const AffineMap& m) {
    return {{"linear", json::array({json::array({m.m11, m.m12}), json::array({m.m21, m.m22})})},
            {"translation", json::array({m.t1, m.t2})}};
}

inline AffineMap affine_from_json(const json& j) {
    const json& lin = detail::field(j, "linear");
    if (!lin.is_array() || lin.size() != 2) throw Error(ErrorCode::ParseError, "\"linear\" must be a 2x2 array");
    const Point r1 = point_from_json(lin[0]), r2 = point_from_json(lin[1]);
    const Point t = j.contains("translation") ? point_from_json(j.at("translation")) : Point{};
    return {r1.x, r1.y, r2.x, r2.y, t.x, t.y};
}

inline json to_json(const JohnCertificate& c) {
    json pairs = json::array();
    for (const auto& p : c.pairs) pairs.push_back({{"u", to_json(p.u)}, {"v", to_json(p.v.as_point())}});
    return {{"pairs", pairs}, {"weights", c.weights}, {"recenter", to_json(c.recenter)}};
}

/// Accepts the bare certificate or an object holding it under "certificate".
inline JohnCertificate certificate_from_json(const json& j) {
    const json& c = j.contains("certificate") ? j.at("certificate") : j;
    JohnCertificate cert;
    for (const auto& p : detail::field(c, "pairs")) {
        const Point u = point_from_json(detail::field(p, "u")), v = point_from_json(detail::field(p, "v"));
        cert.pairs.push_back({u, Direction{v.x, v.y}});
    }
    for (const auto& w : detail::field(c, "weights")) cert.weights.push_back(detail::number(w, "weight"));
    if (cert.weights.size() != cert.pairs.size())
        throw Error(ErrorCode::ParseError, "weights and pairs differ in length");
    cert.recenter = c.contains("recenter") ? point_from_json(c.at("recenter")) : Point{};
    return cert;
}

inline json to_json(const JohnReport& r) {
    return {{"identity", r.identity}, {"sum_u", r.sum_u},           {"sum_v", r.sum_v},
            {"pairing", r.pairing},   {"weight_sum", r.weight_sum}, {"min_weight", r.min_weight},
            {"worst", r.worst},       {"arity_ok", r.arity_ok},     {"passed", r.passed}};
}

inline json to_json(const DistanceReport& r) {
    return {{"r", r.r},
            {"sign", r.sign},
            {"map", to_json(r.map)},
            {"shift_inner", to_json(r.shift_inner)},
            {"shift_outer", to_json(r.shift_outer)},
            {"verified", r.verified},
            {"restarts_used", r.restarts_used},
            {"objective_history", r.objective_history}};
}

/// Accepts the bare report or an object holding it under "report".
inline DistanceReport distance_report_from_json(const json& j) {
    const json& o = j.contains("report") ? j.at("report") : j;
    DistanceReport r;
    r.r = detail::number(detail::field(o, "r"), "r");
    r.sign = static_cast<int>(detail::number(detail::field(o, "sign"), "sign"));
    r.map = affine_from_json(detail::field(o, "map"));
    r.shift_inner = point_from_json(detail::field(o, "shift_inner"));
    r.shift_outer = point_from_json(detail::field(o, "shift_outer"));
    r.verified = o.value("verified", false);
    r.restarts_used = o.value("restarts_used", 0);
    if (o.contains("objective_history"))
        for (const auto& v : o.at("objective_history")) r.objective_history.push_back(detail::number(v, "history"));
    return r;
}

inline json to_json(const scenario::Report& r) {
    json assertions = json::array();
    for (const auto& a : r.assertions)
        assertions.push_back({{"name", a.name}, {"residual", a.residual}, {"passed", a.passed}});
    json bodies = json::object();
    for (const auto& [name, p] : r.bodies) bodies[name] = to_json(p);
    return {{"id", r.id},         {"parameters", r.parameters}, {"values", r.values},
            {"bodies", bodies},   {"assertions", assertions},   {"tolerance", r.tol},
            {"passed", r.passed()}};
}

inline json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

inline ConvexPolygon read_polygon(const std::string& path, const Tolerances& tol = {}) {
    return polygon_from_json(read_json(path), tol);
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << text;
}

}  // namespace bmforge::io
