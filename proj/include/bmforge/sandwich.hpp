#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bmforge/optimize.hpp"
#include "bmforge/polygon.hpp"

namespace bmforge {

/// Minkowski functional of `p` at `q`: the smallest lambda >= 0 with q in lambda * p.
/// Points outside `p` give values above 1.
inline double gauge(const ConvexPolygon& p, const Point& q, const Tolerances& tol = {}) {
    require_origin_interior(p, tol);
    double g = 0.0;
    for (std::size_t e = 0; e < p.size(); ++e) g = std::max(g, dot(q, p.edge_normal(e)) / p.edge_offset(e));
    return g;
}

struct SandwichRatio {
    double r = 1.0;
    Direction direction_witness;  ///< outward unit normal of the outer edge that is hit
    Point point_witness;          ///< inner vertex attaining r
};

/// Smallest r with L inside r * K (homothety about the origin).
inline SandwichRatio min_enclosing_scale(const ConvexPolygon& k, const ConvexPolygon& l, const Tolerances& tol = {}) {
    require_origin_interior(k, tol);
    SandwichRatio best{-std::numeric_limits<double>::infinity(), {}, {}};
    for (const auto& q : l.vertices()) {
        for (std::size_t e = 0; e < k.size(); ++e) {
            const double g = dot(q, k.edge_normal(e)) / k.edge_offset(e);
            if (g > best.r) best = {g, k.edge_normal(e), q};
        }
    }
    best.r = std::max(best.r, 0.0);
    return best;
}

struct AsymmetryResult {
    double r = 1.0;
    Point v;        ///< K is inside -r K + v
    Point center;   ///< homothety center, v = (1 + r) center
    bool verified = false;
};

namespace detail {

// Smallest r with K - c inside -r (K - c); +inf when c is not interior.
inline double asymmetry_at(const ConvexPolygon& k, const Point& c, double depth_tol) {
    double r = 0.0;
    for (std::size_t e = 0; e < k.size(); ++e) {
        const Direction n = k.edge_normal(e);
        const double h = k.edge_offset(e) - dot(c, n);
        if (h <= depth_tol) return std::numeric_limits<double>::infinity();
        for (const auto& q : k.vertices()) r = std::max(r, dot(c - q, n) / h);
    }
    return r;
}

}  // namespace detail

/// Minkowski asymmetry: minimal r with K inside -r K + v for some v.
///
/// Multistart Nelder-Mead over the homothety center followed by a short
/// pattern-search polish; starts are the centroid, points 2/3 of the way from
/// the centroid to each vertex, and seeded interior points up to 16 starts.
inline AsymmetryResult asymmetry_constant(const ConvexPolygon& k, const Tolerances& tol = {},
                                          std::uint64_t seed = 0) {
    const double scale = k.diameter();
    const Point g = centroid(k);
    const double depth_tol = tol.geom * scale;
    auto objective = [&](const opt::Vec& x) { return detail::asymmetry_at(k, {x[0], x[1]}, depth_tol); };

    std::vector<Point> starts{g};
    for (const auto& v : k.vertices()) {
        if (starts.size() >= 16) break;
        starts.push_back(g + (2.0 / 3.0) * (v - g));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (starts.size() < 16) {
        // random convex combination of the centroid and two adjacent vertices
        const auto i = static_cast<std::size_t>(unit(rng) * static_cast<double>(k.size())) % k.size();
        double a = unit(rng), b = unit(rng);
        if (a + b > 1.0) { a = 1.0 - a; b = 1.0 - b; }
        starts.push_back(g + 0.9 * (a * (k[i] - g) + b * (k[i + 1] - g)));
    }

    AsymmetryResult best;
    best.r = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        auto nm = opt::nelder_mead(objective, {s.x, s.y}, 0.05 * scale, 1e-8 * scale, 4000);
        opt::PatternSearchOptions po;
        po.initial_step = 1e-3 * scale;
        po.min_step = 1e-12 * scale;
        po.max_evals = 600;
        auto ps = opt::pattern_search(objective, nm.x, nm.value, po, rng);
        const Point c{ps.x[0], ps.x[1]};
        const bool better = ps.value < best.r ||
                            (ps.value == best.r && (c.x < best.center.x || (c.x == best.center.x && c.y < best.center.y)));
        if (better) {
            best.r = ps.value;
            best.center = c;
        }
    }
    best.v = (1.0 + best.r) * best.center;
    best.verified = contains(scale_negate(k, best.r, best.v), k, tol.cert * scale);
    return best;
}

}  // namespace bmforge
