#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bmforge/common.hpp"

namespace bmforge {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
    Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }
    Point& operator*=(double s) { x *= s; y *= s; return *this; }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(Point a, double s) { return a *= s; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend Point operator/(const Point& a, double s) { return {a.x / s, a.y / s}; }
    friend Point operator-(const Point& a) { return {-a.x, -a.y}; }
    friend bool operator==(const Point&, const Point&) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double cross(const Point& o, const Point& a, const Point& b) { return cross(a - o, b - o); }
inline double norm(const Point& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

/// A linear functional on the plane, stored as the vector that defines it.
struct Direction {
    double dx = 1.0;
    double dy = 0.0;

    static Direction from(const Point& p) { return {p.x, p.y}; }
    Point as_point() const { return {dx, dy}; }
    Direction scaled(double s) const { return {dx * s, dy * s}; }
    double length() const { return std::hypot(dx, dy); }
    Direction unit() const { return scaled(1.0 / length()); }
    friend bool operator==(const Direction&, const Direction&) = default;
};

inline double dot(const Point& p, const Direction& d) { return p.x * d.dx + p.y * d.dy; }
inline double dot(const Direction& d, const Point& p) { return dot(p, d); }

/// Distance from `p` to the closed segment [a, b].
inline double segment_distance(const Point& p, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

namespace detail {

// Andrew's monotone chain. Points within `tol` of the chord through their
// neighbours are dropped, so the output is strictly convex.
inline std::vector<Point> monotone_chain(std::vector<Point> pts, double tol) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<Point> unique;
    unique.reserve(pts.size());
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : unique) {
            if (distance(p, q) <= tol) { dup = true; break; }
        }
        if (!dup) unique.push_back(p);
    }
    if (unique.size() < 3) return unique;

    auto keeps_turn = [tol](const Point& o, const Point& a, const Point& b) {
        const double base = distance(o, b);
        return base > 0.0 && cross(o, a, b) > tol * base;
    };
    std::vector<Point> hull(2 * unique.size());
    std::size_t k = 0;
    for (const auto& p : unique) {
        while (k >= 2 && !keeps_turn(hull[k - 2], hull[k - 1], p)) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = unique.size() - 1; i-- > 0;) {
        const Point& p = unique[i];
        while (k >= lower && !keeps_turn(hull[k - 2], hull[k - 1], p)) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace detail

/// Strictly convex polygon with counterclockwise vertices and positive area.
///
/// Construction always goes through the hull, so any point cloud with three
/// non-collinear points is accepted; non-extreme vertices are dropped.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point> points, double tol = Tolerances{}.geom) {
        for (const auto& p : points) {
            if (!p.finite()) throw Error(ErrorCode::DegenerateInput, "non-finite vertex");
        }
        if (points.size() < 3) throw Error(ErrorCode::DegenerateInput, "fewer than 3 points");
        vertices_ = detail::monotone_chain(std::move(points), tol);
        if (vertices_.size() < 3) {
            throw Error(ErrorCode::DegenerateInput, "points are collinear or coincide");
        }
    }

    std::span<const Point> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point& operator[](std::size_t i) const { return vertices_[i % vertices_.size()]; }
    const Point& vertex(std::size_t i) const { return (*this)[i]; }

    /// Outward unit normal of edge i -> i+1.
    Direction edge_normal(std::size_t i) const {
        const Point e = vertex(i + 1) - vertex(i);
        return Direction{e.y, -e.x}.unit();
    }
    /// Support value of the edge line i -> i+1 along its outward unit normal.
    double edge_offset(std::size_t i) const { return dot(vertex(i), edge_normal(i)); }

    double diameter() const {
        double d = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j) d = std::max(d, distance(vertices_[i], vertices_[j]));
        return d;
    }

private:
    std::vector<Point> vertices_;
};

inline ConvexPolygon convex_hull(std::span<const Point> points, double tol = Tolerances{}.geom) {
    return ConvexPolygon(std::vector<Point>(points.begin(), points.end()), tol);
}

inline double signed_area(std::span<const Point> pts) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) s += cross(pts[i], pts[(i + 1) % pts.size()]);
    return 0.5 * s;
}

inline double area(const ConvexPolygon& p) { return signed_area(p.vertices()); }

inline Point centroid(const ConvexPolygon& p) {
    const Point o = p[0];
    Point acc;
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const double w = cross(o, p[i], p[i + 1]);
        acc += w * (o + p[i] + p[i + 1]) / 3.0;
        total += w;
    }
    return acc / total;
}

inline Point vertex_mean(const ConvexPolygon& p) {
    Point acc;
    for (const auto& v : p.vertices()) acc += v;
    return acc / static_cast<double>(p.size());
}

struct SupportResult {
    double value;
    Point argmax;
    std::size_t index;
};

/// Maximum of <vertex, d>; ties go to the lowest vertex index.
inline SupportResult support(const ConvexPolygon& p, const Direction& d) {
    SupportResult best{dot(p[0], d), p[0], 0};
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double v = dot(p[i], d);
        if (v > best.value) best = {v, p[i], i};
    }
    return best;
}

/// Smallest edge slack of `q` with respect to `outer`; negative outside.
inline double point_slack(const ConvexPolygon& outer, const Point& q) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < outer.size(); ++e) {
        worst = std::min(worst, outer.edge_offset(e) - dot(q, outer.edge_normal(e)));
    }
    return worst;
}

/// Smallest slack of any inner vertex against any outer edge half-plane.
inline double containment_slack(const ConvexPolygon& outer, const ConvexPolygon& inner) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& q : inner.vertices()) worst = std::min(worst, point_slack(outer, q));
    return worst;
}

inline bool contains(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol) {
    return containment_slack(outer, inner) >= -tol;
}

inline bool contains_point(const ConvexPolygon& outer, const Point& q, double tol) {
    return point_slack(outer, q) >= -tol;
}

/// x -> L x + t with L = [[m11, m12], [m21, m22]].
struct AffineMap {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    double t1 = 0.0, t2 = 0.0;

    static AffineMap identity() { return {}; }
    static AffineMap linear(double a, double b, double c, double d) { return {a, b, c, d, 0.0, 0.0}; }
    static AffineMap translation(const Point& t) { return {1.0, 0.0, 0.0, 1.0, t.x, t.y}; }
    static AffineMap scaling(double s) { return linear(s, 0.0, 0.0, s); }
    static AffineMap rotation(double theta) {
        const double c = std::cos(theta), s = std::sin(theta);
        return linear(c, -s, s, c);
    }

    /// The unique map sending src[i] to dst[i] for three affinely independent sources.
    static AffineMap from_triangles(const Point (&src)[3], const Point (&dst)[3]) {
        const Point s1 = src[1] - src[0], s2 = src[2] - src[0];
        const Point d1 = dst[1] - dst[0], d2 = dst[2] - dst[0];
        const double det = cross(s1, s2);
        if (std::abs(det) <= Tolerances{}.det) throw Error(ErrorCode::SingularMap, "source points are collinear");
        // L [s1 s2] = [d1 d2]  =>  L = [d1 d2] [s1 s2]^{-1}
        const double i11 = s2.y / det, i12 = -s2.x / det, i21 = -s1.y / det, i22 = s1.x / det;
        AffineMap m{d1.x * i11 + d2.x * i21, d1.x * i12 + d2.x * i22,
                    d1.y * i11 + d2.y * i21, d1.y * i12 + d2.y * i22, 0.0, 0.0};
        const Point t = dst[0] - m.apply_linear(src[0]);
        m.t1 = t.x;
        m.t2 = t.y;
        return m;
    }

    double det() const { return m11 * m22 - m12 * m21; }
    Point translation_part() const { return {t1, t2}; }
    Point apply_linear(const Point& p) const { return {m11 * p.x + m12 * p.y, m21 * p.x + m22 * p.y}; }
    Point apply(const Point& p) const { return apply_linear(p) + Point{t1, t2}; }
    Point operator()(const Point& p) const { return apply(p); }

    /// (*this) after `inner`: x -> this(inner(x)).
    AffineMap compose(const AffineMap& inner) const {
        AffineMap r{m11 * inner.m11 + m12 * inner.m21, m11 * inner.m12 + m12 * inner.m22,
                    m21 * inner.m11 + m22 * inner.m21, m21 * inner.m12 + m22 * inner.m22, 0.0, 0.0};
        const Point t = apply(inner.translation_part());
        r.t1 = t.x;
        r.t2 = t.y;
        return r;
    }

    AffineMap inverse() const {
        const double d = det();
        if (std::abs(d) <= Tolerances{}.det) throw Error(ErrorCode::SingularMap, "map is not invertible");
        AffineMap r{m22 / d, -m12 / d, -m21 / d, m11 / d, 0.0, 0.0};
        const Point t = -r.apply_linear({t1, t2});
        r.t1 = t.x;
        r.t2 = t.y;
        return r;
    }

    /// Largest entry-wise deviation from `o`.
    double max_abs_diff(const AffineMap& o) const {
        return std::max({std::abs(m11 - o.m11), std::abs(m12 - o.m12), std::abs(m21 - o.m21),
                         std::abs(m22 - o.m22), std::abs(t1 - o.t1), std::abs(t2 - o.t2)});
    }
};

inline ConvexPolygon apply_affine(const AffineMap& t, const ConvexPolygon& p, const Tolerances& tol = {}) {
    if (std::abs(t.det()) <= tol.det) throw Error(ErrorCode::SingularMap, "|det| below tolerance");
    std::vector<Point> out;
    out.reserve(p.size());
    for (const auto& v : p.vertices()) out.push_back(t(v));
    if (t.det() < 0.0) std::reverse(out.begin(), out.end());
    return ConvexPolygon(std::move(out), tol.geom);
}

inline ConvexPolygon translate(const ConvexPolygon& p, const Point& t) {
    return apply_affine(AffineMap::translation(t), p);
}

/// Vertex-wise p -> -lambda p + v.
inline ConvexPolygon scale_negate(const ConvexPolygon& p, double lambda, const Point& v = {}) {
    if (lambda == 0.0) throw Error(ErrorCode::SingularMap, "lambda must be non-zero");
    return apply_affine(AffineMap{-lambda, 0.0, 0.0, -lambda, v.x, v.y}, p);
}

/// Homothety about the origin, lambda may be negative.
inline ConvexPolygon scaled(const ConvexPolygon& p, double lambda) { return scale_negate(p, -lambda); }

/// Distance from the origin to the boundary, negative when 0 is outside.
inline double origin_depth(const ConvexPolygon& p) { return point_slack(p, Point{}); }

inline void require_origin_interior(const ConvexPolygon& p, const Tolerances& tol = {}) {
    if (origin_depth(p) <= tol.geom) throw Error(ErrorCode::OriginNotInterior, "origin is not strictly interior");
}

/// Polar body: every edge with outward unit normal n and offset h becomes the vertex n / h.
inline ConvexPolygon polar(const ConvexPolygon& p, const Tolerances& tol = {}) {
    require_origin_interior(p, tol);
    std::vector<Point> out;
    out.reserve(p.size());
    for (std::size_t e = 0; e < p.size(); ++e) out.push_back(p.edge_normal(e).as_point() / p.edge_offset(e));
    return ConvexPolygon(std::move(out), tol.geom);
}

/// True when both polygons have the same vertex set within `tol` (order ignored).
inline bool same_vertex_set(const ConvexPolygon& a, const ConvexPolygon& b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& p : a.vertices()) {
        bool found = false;
        for (const auto& q : b.vertices()) {
            if (distance(p, q) <= tol) { found = true; break; }
        }
        if (!found) return false;
    }
    return true;
}

/// Center of symmetry when 2o - P = P within `tol`.
inline std::optional<Point> symmetry_center(const ConvexPolygon& p, double tol) {
    if (p.size() % 2 != 0) return std::nullopt;
    const Point o = vertex_mean(p);
    const ConvexPolygon reflected = scale_negate(p, 1.0, 2.0 * o);
    if (!same_vertex_set(p, reflected, tol)) return std::nullopt;
    return o;
}

/// Distance from `q` to the convex hull of a small point set; 0 when inside.
/// Handles degenerate hulls (single point, segment).
inline double hull_distance(const Point& q, std::span<const Point> pts, double tol = Tolerances{}.geom) {
    if (pts.empty()) return std::numeric_limits<double>::infinity();
    const auto hull = detail::monotone_chain(std::vector<Point>(pts.begin(), pts.end()), tol);
    if (hull.size() == 1) return distance(q, hull[0]);
    if (hull.size() == 2) return segment_distance(q, hull[0], hull[1]);
    bool inside = true;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point& a = hull[i];
        const Point& b = hull[(i + 1) % hull.size()];
        if (cross(a, b, q) < 0.0) inside = false;
        d = std::min(d, segment_distance(q, a, b));
    }
    return inside ? 0.0 : d;
}

}  // namespace bmforge
