#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bmforge/common.hpp"
#include "bmforge/distance.hpp"
#include "bmforge/generators.hpp"
#include "bmforge/john.hpp"
#include "bmforge/polygon.hpp"

namespace bmforge::scenario {

struct Assertion {
    std::string name;
    double residual = 0.0;
    bool passed = false;
};

/// Outcome of one replayed construction. Every assertion carries a
/// non-negative residual and passes iff residual <= tol.
struct Report {
    std::string id;
    std::map<std::string, double> parameters;
    std::vector<std::pair<std::string, ConvexPolygon>> bodies;
    std::map<std::string, double> values;
    std::vector<Assertion> assertions;
    double tol = Tolerances{}.cert;

    void check(std::string name, double residual) {
        const bool ok = residual <= tol;
        assertions.push_back({std::move(name), residual, ok});
    }
    void flag(std::string name, bool ok) { check(std::move(name), ok ? 0.0 : 1.0); }

    void add_body(const std::string& name, const ConvexPolygon& p) {
        for (auto& [n, q] : bodies) {
            if (n == name) { q = p; return; }
        }
        bodies.emplace_back(name, p);
    }
    const ConvexPolygon* body(std::string_view name) const {
        for (const auto& [n, q] : bodies)
            if (n == name) return &q;
        return nullptr;
    }
    const Assertion* assertion(std::string_view name) const {
        for (const auto& a : assertions)
            if (a.name == name) return &a;
        return nullptr;
    }
    bool passed() const {
        return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
    }
    void merge(const Report& other) {
        for (const auto& a : other.assertions) assertions.push_back(a);
        for (const auto& [k, v] : other.values) values[k] = v;
        for (const auto& [n, p] : other.bodies) add_body(n, p);
    }
};

/// Equilateral contact frame: u_i on the unit circle, a = -2u1, b = -2u2, c = -2u3.
/// Line bc is <x, u1> = 1, line ca is <x, u2> = 1 and line ab is <x, u3> = 1.
struct Frame {
    Point u1, u2, u3;
    Point a, b, c;

    static Frame standard() {
        const double s = std::sqrt(3.0) / 2.0;
        Frame f;
        f.u1 = {s, 0.5};
        f.u2 = {-s, 0.5};
        f.u3 = {0.0, -1.0};
        f.a = -2.0 * f.u1;
        f.b = -2.0 * f.u2;
        f.c = -2.0 * f.u3;
        return f;
    }
    ConvexPolygon inner() const { return ConvexPolygon({u1, u2, u3}); }
    ConvexPolygon abc() const { return ConvexPolygon({a, b, c}); }
    ConvexPolygon outer() const { return ConvexPolygon({4.0 * u1, 4.0 * u2, 4.0 * u3}); }
};

namespace fixtures {

// Case 1b: contacts at c and along the interior of [a, b].
inline ConvexPolygon case1b_k() {
    const auto f = Frame::standard();
    return ConvexPolygon({f.u3, {0.6, -0.55}, f.u1, f.u2, {-0.6, -0.55}});
}
inline ConvexPolygon case1b_l() {
    const auto f = Frame::standard();
    return ConvexPolygon({f.c, f.u2, {-1.25, -0.5}, {-0.9, -1.0}, {0.9, -1.0}, {1.25, -0.5}, f.u1});
}

// Case 1c: contacts along [b, c]; [u2, u3] lies on the boundary of K.
inline ConvexPolygon case1c_k() {
    const auto f = Frame::standard();
    return ConvexPolygon({f.u3, {0.3, -0.7}, f.u1, {-0.52, 0.7}, f.u2});
}
inline ConvexPolygon case1c_l() {
    const auto f = Frame::standard();
    return ConvexPolygon({f.u3, f.b, f.c, f.u2, {-0.693, -0.4}});
}

// Case 2a: four contacts, both bodies quadrilaterals.
inline ConvexPolygon case2a_k() { return gen::unit_square(); }
inline ConvexPolygon case2a_l() { return ConvexPolygon({{2, 0}, {0, 2}, {-2, 0}, {0, -2}}); }

// Case 2b: trapezoid u1 u2 u3 u4, contacts x = (0, 1) and y = (0, -1) only.
inline ConvexPolygon case2b_k() {
    return ConvexPolygon({{-1.0, -0.5}, {1.0, -0.5}, {0.9, 0.0}, {0.6, 0.5}, {-0.6, 0.5}, {-0.9, 0.0}});
}
inline ConvexPolygon case2b_l() {
    return ConvexPolygon({{0.0, -1.0}, {1.0, -0.5}, {1.1, -0.2}, {0.6, 0.5}, {0.0, 1.0}, {-0.6, 0.5}, {-1.1, -0.2},
                          {-1.0, -0.5}});
}

// Case 3: symmetric L with three contacts against -2K.
inline ConvexPolygon case3_k() { return ConvexPolygon({{1, 0}, {0, 1}, {-1, 0}, {-0.6, -0.6}, {0, -1}}); }
inline ConvexPolygon case3_l() { return gen::unit_square(); }

}  // namespace fixtures

/// Boundary coincidences of nested bodies: inner vertices on the outer
/// boundary and outer vertices on the inner boundary. A shared segment shows
/// up through its endpoints.
inline std::vector<Point> boundary_contacts(const ConvexPolygon& inner, const ConvexPolygon& outer, double tol) {
    std::vector<Point> out;
    auto add = [&](const Point& q) {
        for (const auto& p : out)
            if (distance(p, q) <= tol) return;
        out.push_back(q);
    };
    for (const auto& q : inner.vertices())
        if (std::abs(point_slack(outer, q)) <= tol) add(q);
    for (const auto& q : outer.vertices())
        if (std::abs(point_slack(inner, q)) <= tol) add(q);
    return out;
}

namespace detail {

inline double inclusion_residual(const ConvexPolygon& outer, const ConvexPolygon& inner) {
    return std::max(0.0, -containment_slack(outer, inner));
}

// Parameter of the projection of p on [a, b] plus its distance to the line.
inline std::pair<double, double> segment_coords(const Point& p, const Point& a, const Point& b) {
    const Point d = b - a;
    const double len = norm(d);
    return {dot(p - a, d) / (len * len), std::abs(cross(d, p - a)) / len};
}

// Zero when p lies in the open segment (a, b) up to the line distance.
inline double open_segment_residual(const Point& p, const Point& a, const Point& b) {
    const auto [t, off] = segment_coords(p, a, b);
    const double inside = (t > 0.0 && t < 1.0) ? 0.0 : std::max(std::abs(t), std::abs(t - 1.0)) + 1.0;
    return off + inside;
}

inline double collinearity_residual(const Point& p, const Point& q, const Point& r) {
    const Point d1 = q - p, d2 = r - p;
    const double s = norm(d1) * norm(d2);
    return s == 0.0 ? 0.0 : std::abs(cross(d1, d2)) / s;
}

// Intersection parameters (s on [p0, p1], t on [q0, q1]); nullopt when parallel.
inline std::optional<std::pair<double, double>> intersect(const Point& p0, const Point& p1, const Point& q0,
                                                          const Point& q1) {
    const Point r = p1 - p0, s = q1 - q0;
    const double den = cross(r, s);
    if (std::abs(den) <= 1e-15 * norm(r) * norm(s)) return std::nullopt;
    const Point w = q0 - p0;
    return std::make_pair(cross(w, s) / den, cross(w, r) / den);
}

// Zero when the closed segment [p0, p1] meets the open segment (q0, q1).
inline double crossing_residual(const Point& p0, const Point& p1, const Point& q0, const Point& q1) {
    const auto st = intersect(p0, p1, q0, q1);
    if (!st) return 1.0;
    const auto [s, t] = *st;
    double r = std::max({0.0, -s, s - 1.0});
    if (!(t > 0.0 && t < 1.0)) r = std::max(r, 1.0 + std::min(std::abs(t), std::abs(t - 1.0)));
    return r;
}

inline void require_epsilon(double eps) {
    if (!std::isfinite(eps) || eps < 0.0) throw Error(ErrorCode::PreconditionViolated, "epsilon must be >= 0");
}

inline void require_fits(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol, double eps) {
    const double res = inclusion_residual(outer, inner);
    if (res > tol)
        throw Error(ErrorCode::EpsilonTooLarge,
                    "image leaves -2K by " + std::to_string(res) + " at epsilon " + std::to_string(eps));
}

inline void check_dual_hull(Report& rep, const ConvexPolygon& lp, const ConvexPolygon& big, double eps,
                            const Tolerances& tol) {
    const auto dual = dual_contact_hull_check(lp, big, tol);
    rep.values["dual_hull_holds"] = dual.holds ? 1.0 : 0.0;
    rep.values["dual_points"] = static_cast<double>(dual.points.size());
    if (eps > 0.0) rep.flag("dual hull check fails", !dual.holds);
}

}  // namespace detail

/// Verifies conv{u} in K in L in abc in -2K in conv{4u}; throws ChainViolated
/// naming the first inclusion that fails.
inline Report build_case1_frame(const std::optional<ConvexPolygon>& k_in = std::nullopt,
                                const std::optional<ConvexPolygon>& l_in = std::nullopt, const Tolerances& tol = {}) {
    const auto f = Frame::standard();
    const ConvexPolygon k = k_in.value_or(fixtures::case1b_k());
    const ConvexPolygon l = l_in.value_or(fixtures::case1b_l());
    const ConvexPolygon big = scale_negate(k, 2.0);
    Report rep;
    rep.id = "case1_frame";
    rep.tol = tol.cert;
    rep.add_body("K", k);
    rep.add_body("L", l);
    rep.add_body("abc", f.abc());
    rep.add_body("-2K", big);
    const std::pair<const char*, double> chain[] = {
        {"conv{u} in K", detail::inclusion_residual(k, f.inner())},
        {"K in L", detail::inclusion_residual(l, k)},
        {"L in abc", detail::inclusion_residual(f.abc(), l)},
        {"abc in -2K", detail::inclusion_residual(big, f.abc())},
        {"-2K in conv{4u}", detail::inclusion_residual(f.outer(), big)},
    };
    for (const auto& [name, res] : chain) {
        if (!(res <= tol.cert)) throw Error(ErrorCode::ChainViolated, std::string(name) + " fails by " + std::to_string(res));
        rep.check(name, res);
    }
    return rep;
}

/// Terminal configuration of Case 1a: every contact of L with -2K sits in the
/// interior of a side of abc and -2K is the triangle itself.
inline Report case1a(const std::optional<ConvexPolygon>& k_in = std::nullopt,
                     const std::optional<ConvexPolygon>& l_in = std::nullopt, const Tolerances& tol = {}) {
    const auto f = Frame::standard();
    const ConvexPolygon k = k_in.value_or(f.inner());
    const ConvexPolygon l = l_in.value_or(f.inner());
    Report rep = build_case1_frame(k, l, tol);
    rep.id = "case1a";
    const ConvexPolygon big = scale_negate(k, 2.0);
    const auto contacts = boundary_contacts(l, big, tol.cert);
    rep.values["contacts"] = static_cast<double>(contacts.size());
    const Point sides[3][2] = {{f.a, f.b}, {f.b, f.c}, {f.c, f.a}};
    double worst = 0.0;
    int covered[3] = {0, 0, 0};
    for (const auto& p : contacts) {
        double best = std::numeric_limits<double>::infinity();
        int side = -1;
        for (int s = 0; s < 3; ++s) {
            const double r = detail::open_segment_residual(p, sides[s][0], sides[s][1]);
            if (r < best) { best = r; side = s; }
        }
        const double corner = std::min({distance(p, f.a), distance(p, f.b), distance(p, f.c)});
        worst = std::max(worst, corner <= tol.cert ? 1.0 : best);
        if (side >= 0 && best <= tol.cert) ++covered[side];
    }
    rep.check("contacts in open sides of abc", contacts.empty() ? 1.0 : worst);
    rep.flag("every side has a contact", covered[0] > 0 && covered[1] > 0 && covered[2] > 0);
    rep.flag("-2K equals abc", same_vertex_set(big, f.abc(), tol.cert));
    return rep;
}

/// Stretch about `center`: (f(eps) dx, (1 - eps) dy) in the frame of the
/// contact triangle. f is the least factor >= 1 that puts u1 and u2 outside
/// abc by eps * 1e-2 and keeps their preimages inside abc, so that u1 and u2
/// stay in L'.
inline Report case1b_stretch(const ConvexPolygon& k, const ConvexPolygon& l, double eps,
                             std::optional<Point> center_in = std::nullopt, const Tolerances& tol = {}) {
    detail::require_epsilon(eps);
    const auto fr = Frame::standard();
    const Point center = center_in.value_or(fr.u3);
    const double margin = eps * 1e-2;
    double f = 1.0;
    for (const Point& p : {fr.u1, fr.u2}) {
        const Point n = p;  // side normal through the midpoint u_i
        const Point d = p - center;
        const double gain = d.x * n.x;
        if (gain <= 0.0) throw Error(ErrorCode::PreconditionViolated, "stretch cannot move u_i across its side");
        const double need = 1.0 + margin - dot(center, n) - (1.0 - eps) * d.y * n.y;
        f = std::max(f, need / gain);
        const double room = 1.0 - dot(center, n) - d.y * n.y / (1.0 - eps);
        if (room <= 0.0) throw Error(ErrorCode::EpsilonTooLarge, "preimage of u_i leaves abc");
        f = std::max(f, gain / room);
    }
    const AffineMap scale = AffineMap::linear(f, 0.0, 0.0, 1.0 - eps);
    const AffineMap t = AffineMap::translation(center).compose(scale).compose(AffineMap::translation(-center));

    Report rep;
    rep.id = "case1b_stretch";
    rep.tol = tol.cert;
    rep.parameters["epsilon"] = eps;
    rep.values["f"] = f;
    rep.values["det"] = t.det();
    rep.check("map determinant positive", std::max(0.0, tol.det - t.det()));
    const ConvexPolygon lp = apply_affine(t, l, tol);
    const ConvexPolygon big = scale_negate(k, 2.0);
    rep.add_body("K", k);
    rep.add_body("L", l);
    rep.add_body("L'", lp);
    rep.add_body("-2K", big);
    rep.add_body("abc", fr.abc());
    detail::require_fits(big, lp, tol.cert, eps);
    rep.check("K in L'", detail::inclusion_residual(lp, k));
    rep.check("L' in -2K", detail::inclusion_residual(big, lp));
    rep.values["contacts"] = static_cast<double>(boundary_contacts(lp, big, tol.cert).size());
    if (eps > 0.0) {
        rep.check("T(u1) outside abc", std::max(0.0, margin - (dot(t(fr.u1), fr.u1) - 1.0)));
        rep.check("T(u2) outside abc", std::max(0.0, margin - (dot(t(fr.u2), fr.u2) - 1.0)));
    }
    detail::check_dual_hull(rep, lp, big, eps, tol);
    return rep;
}

/// The explicit shift-then-stretch frame: u3' = (0, 0), b = (1 + eps, 0),
/// c = (eps, sqrt 3) and T = diag((1 - eps) / (1 - 2 eps), 1 - eps).
/// Requires 0 < r < 1 and 0 <= eps < (1 - r) / 2.
inline Report case1b_shift_stretch(double eps, double r, int samples = 10000, const Tolerances& tol = {}) {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::PreconditionViolated, "r must lie in (0, 1)");
    if (!std::isfinite(eps) || eps < 0.0 || eps >= (1.0 - r) / 2.0)
        throw Error(ErrorCode::PreconditionViolated, "need 0 <= epsilon < (1 - r) / 2");
    const double s3 = std::sqrt(3.0);
    const double sx = (1.0 - eps) / (1.0 - 2.0 * eps), sy = 1.0 - eps;
    const AffineMap t = AffineMap::linear(sx, 0.0, 0.0, sy);
    const Point a{-1.0 + eps, 0.0}, b{1.0 + eps, 0.0}, c{eps, s3};
    const Point cp{0.0, s3}, u1p{0.5, s3 / 2.0}, u2p{-0.5, s3 / 2.0};

    Report rep;
    rep.id = "case1b_shift";
    rep.tol = tol.cert;
    rep.parameters["epsilon"] = eps;
    rep.parameters["r"] = r;
    rep.values["sx"] = sx;
    rep.values["sy"] = sy;
    rep.values["identity_deviation"] = t.max_abs_diff(AffineMap::identity());
    rep.check("map determinant positive", std::max(0.0, tol.det - t.det()));

    const Point tc = t(cp);
    rep.check("T(c') interior to [a, c]", detail::open_segment_residual(tc, a, c));
    rep.check("T(c'), u1', T(u1') collinear", detail::collinearity_residual(tc, u1p, t(u1p)));
    rep.check("T(c'), u2', T(u2') collinear", detail::collinearity_residual(tc, u2p, t(u2p)));

    // image left of bc: sx sqrt3 x + sy y <= sqrt3 (1 + eps), linear so the
    // region vertices bound every sample
    const double rhs = s3 * (1.0 + eps);
    auto excess = [&](double x, double y) { return std::max(0.0, sx * s3 * x + sy * y - rhs); };
    double worst = 0.0;
    const Point region[] = {{0.0, 0.0}, {r, 0.0}, {r, s3 * (1.0 - r)}, {0.0, s3}};
    for (const auto& p : region) worst = std::max(worst, excess(p.x, p.y));
    auto radical_inverse = [](std::uint64_t i, std::uint64_t base) {
        double inv = 1.0 / static_cast<double>(base), f = inv, v = 0.0;
        for (; i > 0; i /= base, f *= inv) v += f * static_cast<double>(i % base);
        return v;
    };
    int accepted = 0;
    for (std::uint64_t i = 1; accepted < samples; ++i) {
        const double x = r * radical_inverse(i, 2), y = s3 * radical_inverse(i, 3);
        if (!(x > 0.0 && y > 0.0 && s3 * x + y < s3)) continue;
        ++accepted;
        worst = std::max(worst, excess(x, y));
    }
    rep.values["samples"] = accepted;
    rep.check("sampled images left of bc", worst);

    rep.add_body("abc", ConvexPolygon({a, b, c}));
    const ConvexPolygon reg(std::vector<Point>(std::begin(region), std::end(region)));
    rep.add_body("region", reg);
    rep.add_body("T(region)", apply_affine(t, reg, tol));
    return rep;
}

/// Affine map of Case 1c: T(b) = b, T(c) = c' at distance eps from c along
/// [c, b], T(u3) on (a, b) chosen so that c', u2 and T(u2) are collinear.
inline Report case1c_trapezoid_map(const ConvexPolygon& k, const ConvexPolygon& l, double eps, const Tolerances& tol = {}) {
    detail::require_epsilon(eps);
    const auto fr = Frame::standard();
    const Point cp = fr.c + eps * (fr.b - fr.c) / distance(fr.b, fr.c);
    const Point half = (cp - fr.b) / 2.0;
    // cross(u2 - c', b + mu (a - b) + half - c') = 0, linear in mu
    const Point w = fr.u2 - cp;
    const double den = cross(w, fr.a - fr.b);
    if (std::abs(den) <= tol.det) throw Error(ErrorCode::InconsistentConditions, "collinearity cannot be met");
    const double mu = -cross(w, fr.b + half - cp) / den;
    const Point u3p = fr.b + mu * (fr.a - fr.b);
    const Point u2p = u3p + half;
    const Point src[3] = {fr.b, fr.c, fr.u3};
    const Point dst[3] = {fr.b, cp, u3p};
    const AffineMap t = AffineMap::from_triangles(src, dst);

    Report rep;
    rep.id = "case1c";
    rep.tol = tol.cert;
    rep.parameters["epsilon"] = eps;
    rep.values["mu"] = mu;
    rep.values["det"] = t.det();
    rep.check("map determinant positive", std::max(0.0, tol.det - t.det()));

    // the fourth condition follows from the trapezoid shape
    const double fourth = distance(t(fr.u2), u2p);
    rep.values["fourth_condition_residual"] = fourth;
    if (fourth > tol.cert) throw Error(ErrorCode::InconsistentConditions, "T(u2) misses u2' by " + std::to_string(fourth));
    rep.check("T(u2) = u2'", fourth);
    const double ratio = distance(t(fr.u3), t(fr.u2)) / distance(t(fr.b), t(fr.c));
    rep.values["base_ratio"] = ratio;
    rep.check("base ratio 1/2", std::abs(ratio - 0.5));
    rep.check("|c c'| = epsilon", std::abs(distance(fr.c, t(fr.c)) - eps));
    rep.check("c', u2, u2' collinear", detail::collinearity_residual(cp, fr.u2, u2p));
    rep.check("T(u3) interior to [a, b]", detail::open_segment_residual(u3p, fr.a, fr.b));
    if (eps > 0.0) rep.check("u2' outside abc", std::max(0.0, 1.0 - dot(u2p, fr.u2)));

    const ConvexPolygon lp = apply_affine(t, l, tol);
    const ConvexPolygon big = scale_negate(k, 2.0);
    rep.add_body("K", k);
    rep.add_body("L", l);
    rep.add_body("L'", lp);
    rep.add_body("-2K", big);
    rep.add_body("abc", fr.abc());
    detail::require_fits(big, lp, tol.cert, eps);
    rep.check("K in L'", detail::inclusion_residual(lp, k));
    rep.check("L' in -2K", detail::inclusion_residual(big, lp));

    const auto contacts = boundary_contacts(lp, big, tol.cert);
    rep.values["contacts"] = static_cast<double>(contacts.size());
    if (eps > 0.0) {
        double worst = 0.0;
        for (const auto& p : contacts) {
            if (distance(p, fr.c) <= tol.cert || distance(p, fr.a) <= tol.cert) { worst = std::max(worst, 1.0); continue; }
            const auto [ta, da] = detail::segment_coords(p, fr.b, fr.a);
            const auto [tc, dc] = detail::segment_coords(p, fr.b, fr.c);
            const double ra = da + std::max({0.0, -ta, ta - 1.0});
            const double rc = dc + std::max({0.0, -tc, tc - 1.0});
            worst = std::max(worst, std::min(ra, rc));
        }
        rep.check("contacts in [b, a) or [b, c)", worst);
    }
    detail::check_dual_hull(rep, lp, big, eps, tol);
    return rep;
}

/// Case 2b configuration: trapezoid u1 u2 u3 u4 (u1u2 parallel to u3u4) and
/// the two outer contacts x (above u3u4) and y (below u1u2).
struct Case2bConfig {
    ConvexPolygon k = fixtures::case2b_k();
    ConvexPolygon l = fixtures::case2b_l();
    Point u1{-1.0, -0.5}, u2{1.0, -0.5}, u3{0.6, 0.5}, u4{-0.6, 0.5};
    Point x{0.0, 1.0}, y{0.0, -1.0};
};

/// Squeezes [y, x] by eps and widens along the bases so that every contact
/// with -2K disappears. Requires x - y perpendicular to the bases.
inline Report case2b_trapezoid_perturb(const Case2bConfig& cfg, double eps, const Tolerances& tol = {}) {
    detail::require_epsilon(eps);
    if (eps >= 0.5) throw Error(ErrorCode::EpsilonTooLarge, "epsilon must stay below 1/2");
    const Point o = (cfg.x + cfg.y) / 2.0;
    const Point d = (cfg.u2 - cfg.u1) / distance(cfg.u1, cfg.u2);
    const Point e{-d.y, d.x};
    const double h = std::abs(dot(cfg.x - o, e));
    if (std::abs(dot(cfg.x - o, d)) > tol.geom || h <= tol.geom)
        throw Error(ErrorCode::PreconditionViolated, "x - y must be perpendicular to the bases");
    const double sx = (1.0 - eps) / (1.0 - 2.0 * eps) + eps;
    const double sy = 1.0 - eps / h;
    // o + sx <p - o, d> d + sy <p - o, e> e
    const AffineMap lin{sx * d.x * d.x + sy * e.x * e.x, sx * d.x * d.y + sy * e.x * e.y,
                        sx * d.y * d.x + sy * e.y * e.x, sx * d.y * d.y + sy * e.y * e.y, 0.0, 0.0};
    const AffineMap t = AffineMap::translation(o).compose(lin).compose(AffineMap::translation(-o));

    Report rep;
    rep.id = "case2b";
    rep.tol = tol.cert;
    rep.parameters["epsilon"] = eps;
    rep.values["sx"] = sx;
    rep.values["sy"] = sy;
    rep.values["det"] = t.det();
    rep.check("map determinant positive", std::max(0.0, tol.det - t.det()));

    const Point tu1 = t(cfg.u1), tu2 = t(cfg.u2), tu3 = t(cfg.u3), tu4 = t(cfg.u4), tx = t(cfg.x), ty = t(cfg.y);
    if (eps > 0.0) {
        const double lo = dot(cfg.u1 - o, e), hi = dot(cfg.u3 - o, e);
        auto between = [&](const Point& p) {
            const double s = dot(p - o, e);
            return (s > std::min(lo, hi) && s < std::max(lo, hi)) ? 0.0 : 1.0 + std::abs(s);
        };
        rep.check("T(u1)T(u2) parallel to u1u2", std::abs(cross((tu2 - tu1) / distance(tu1, tu2), d)));
        rep.check("T(u3)T(u4) parallel to u3u4", std::abs(cross((tu4 - tu3) / distance(tu3, tu4), d)));
        rep.check("T-bases between u1u2 and u3u4", std::max({between(tu1), between(tu2), between(tu3), between(tu4)}));
        rep.check("T(x) in conv{x, u3, u4}", hull_distance(tx, std::vector<Point>{cfg.x, cfg.u3, cfg.u4}, tol.geom));
        rep.check("T(y) in conv{y, u1, u2}", hull_distance(ty, std::vector<Point>{cfg.y, cfg.u1, cfg.u2}, tol.geom));
        rep.check("[T(x), T(u3)] crosses (x, u3)", detail::crossing_residual(tx, tu3, cfg.x, cfg.u3));
        rep.check("[T(x), T(u4)] crosses (x, u4)", detail::crossing_residual(tx, tu4, cfg.x, cfg.u4));
        rep.check("[T(y), T(u1)] crosses (y, u1)", detail::crossing_residual(ty, tu1, cfg.y, cfg.u1));
        rep.check("[T(y), T(u2)] crosses (y, u2)", detail::crossing_residual(ty, tu2, cfg.y, cfg.u2));
        rep.check("|x x'| = epsilon", std::abs(distance(cfg.x, tx) - eps));
    }

    const ConvexPolygon lp = apply_affine(t, cfg.l, tol);
    const ConvexPolygon big = scale_negate(cfg.k, 2.0);
    rep.add_body("K", cfg.k);
    rep.add_body("L", cfg.l);
    rep.add_body("L'", lp);
    rep.add_body("-2K", big);
    detail::require_fits(big, lp, tol.cert, eps);
    rep.check("K in L'", detail::inclusion_residual(lp, cfg.k));
    rep.check("L' in -2K", detail::inclusion_residual(big, lp));
    rep.values["contacts_before"] = static_cast<double>(boundary_contacts(cfg.l, big, tol.cert).size());
    const auto contacts = boundary_contacts(lp, big, tol.cert);
    rep.values["contacts"] = static_cast<double>(contacts.size());
    if (eps > 0.0) rep.check("no contacts with -2K", static_cast<double>(contacts.size()));
    detail::check_dual_hull(rep, lp, big, eps, tol);
    return rep;
}

/// Case 2a: four contacts force two quadrilaterals; the closing step is the
/// parallelogram-triangle distance 2.
inline Report case2a(const std::optional<ConvexPolygon>& k_in = std::nullopt,
                     const std::optional<ConvexPolygon>& l_in = std::nullopt, std::uint64_t seed = 0,
                     const Tolerances& tol = {}) {
    const ConvexPolygon k = k_in.value_or(fixtures::case2a_k());
    const ConvexPolygon l = l_in.value_or(fixtures::case2a_l());
    const ConvexPolygon big = scale_negate(k, 2.0);
    Report rep;
    rep.id = "case2a";
    rep.tol = tol.cert;
    rep.add_body("K", k);
    rep.add_body("L", l);
    rep.add_body("-2K", big);
    rep.check("K in L", detail::inclusion_residual(l, k));
    rep.check("L in -2K", detail::inclusion_residual(big, l));
    const auto contacts = boundary_contacts(l, big, tol.cert);
    rep.values["contacts"] = static_cast<double>(contacts.size());
    rep.check("four contacts", std::abs(static_cast<double>(contacts.size()) - 4.0));
    rep.flag("K is a quadrilateral", k.size() == 4);
    rep.flag("L is a quadrilateral", l.size() == 4);
    if (contacts.size() >= 3) rep.flag("L = conv{contacts}", same_vertex_set(l, ConvexPolygon(contacts), tol.cert));
    DistanceOptions opt;
    opt.seed = seed;
    opt.tol = tol;
    const auto dg = grunbaum_distance(gen::unit_square(), gen::triangle(), opt);
    rep.values["dG_parallelogram_triangle"] = dg.r;
    rep.flag("distance certified", dg.verified);
    rep.check("dG(parallelogram, triangle) = 2", std::max(0.0, std::abs(dg.r - 2.0) - 1e-3));
    return rep;
}

/// Symmetric deduction of Case 3: o is the midpoint of [x1, x3], 2o - x2 = x4
/// and L = conv{x1, x2, x3, x4}.
inline Report case3_parallelogram_deduction(const ConvexPolygon& l, const Point& x1, const Point& x2, const Point& x3,
                                            const Point& x4, const Tolerances& tol = {}) {
    const auto o = symmetry_center(l, tol.cert);
    if (!o) throw Error(ErrorCode::NotSymmetric, "L has no center of symmetry");
    const std::vector<Point> xs{x1, x2, x3, x4};
    if (distance(x1, x3) <= tol.geom || bmforge::detail::monotone_chain(xs, tol.geom).size() < 3)
        throw Error(ErrorCode::DegenerateInput, "contact points are degenerate");
    Report rep;
    rep.id = "case3";
    rep.tol = tol.cert;
    rep.values["center_x"] = o->x;
    rep.values["center_y"] = o->y;
    rep.check("o is the midpoint of [x1, x3]", distance(*o, (x1 + x3) / 2.0));
    rep.check("2o - x2 = x4", distance(2.0 * *o - x2, x4));
    const ConvexPolygon hull(xs);
    double res = 0.0;
    for (const auto& v : l.vertices()) res = std::max(res, hull_distance(v, xs, tol.geom));
    for (const auto& x : xs) res = std::max(res, std::max(0.0, -point_slack(l, x)));
    rep.check("L = conv{x1, x2, x3, x4}", res);
    rep.add_body("L", l);
    rep.add_body("conv{x}", hull);
    return rep;
}

/// Case 3 replay on a body pair: labels the three contacts of L with -2K
/// (x2 opposite the widest angular gap) and takes x4 where the edge lines of
/// L through x3 and x1 meet across that gap.
inline Report case3(const std::optional<ConvexPolygon>& k_in = std::nullopt,
                    const std::optional<ConvexPolygon>& l_in = std::nullopt, const Tolerances& tol = {}) {
    const ConvexPolygon k = k_in.value_or(fixtures::case3_k());
    const ConvexPolygon l = l_in.value_or(fixtures::case3_l());
    const ConvexPolygon big = scale_negate(k, 2.0);
    auto contacts = boundary_contacts(l, big, tol.cert);
    if (contacts.size() != 3)
        throw Error(ErrorCode::PreconditionViolated, "expected 3 contacts, found " + std::to_string(contacts.size()));
    const Point g = centroid(l);
    std::sort(contacts.begin(), contacts.end(), [&](const Point& p, const Point& q) {
        return std::atan2(p.y - g.y, p.x - g.x) < std::atan2(q.y - g.y, q.x - g.x);
    });
    std::size_t gap = 0;
    double widest = -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const Point p = contacts[i] - g, q = contacts[(i + 1) % 3] - g;
        double ang = std::atan2(q.y, q.x) - std::atan2(p.y, p.x);
        if (ang <= 0.0) ang += 2.0 * std::numbers::pi;
        if (ang > widest) { widest = ang; gap = i; }
    }
    const Point x3 = contacts[gap], x1 = contacts[(gap + 1) % 3], x2 = contacts[(gap + 2) % 3];
    auto vertex_index = [&](const Point& p) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < l.size(); ++i)
            if (distance(l[i], p) <= tol.cert) return i;
        return std::nullopt;
    };
    const auto i3 = vertex_index(x3), i1 = vertex_index(x1);
    if (!i3 || !i1) throw Error(ErrorCode::PreconditionViolated, "contacts x1, x3 must be vertices of L");
    // edge leaving x3 counterclockwise and edge arriving at x1
    const auto st = detail::intersect(l[*i3], l[*i3 + 1], l[*i1 + l.size() - 1], l[*i1]);
    if (!st) throw Error(ErrorCode::PreconditionViolated, "supporting lines through x1 and x3 are parallel");
    const Point x4 = l[*i3] + st->first * (l[*i3 + 1] - l[*i3]);

    Report rep = case3_parallelogram_deduction(l, x1, x2, x3, x4, tol);
    rep.check("K in L", detail::inclusion_residual(l, k));
    rep.check("L in -2K", detail::inclusion_residual(big, l));
    rep.values["contacts"] = 3.0;
    rep.add_body("K", k);
    rep.add_body("-2K", big);
    return rep;
}

/// The regular pentagon against the triangle: d = 1 + sqrt5 / 2 > 2 while the
/// negative branch reaches 2.
inline Report remark_pentagon(std::uint64_t seed = 0, const Tolerances& tol = {}) {
    const ConvexPolygon pent = gen::regular_polygon(5);
    const ConvexPolygon tri = gen::triangle();
    DistanceOptions opt;
    opt.seed = seed;
    opt.tol = tol;
    const auto d = banach_mazur_distance(pent, tri, opt);
    const auto dg = grunbaum_distance(pent, tri, opt);
    Report rep;
    rep.id = "remark_pentagon";
    rep.tol = tol.cert;
    rep.values["d"] = d.r;
    rep.values["dG"] = dg.r;
    rep.values["dG_sign"] = dg.sign;
    const double expected = 1.0 + std::sqrt(5.0) / 2.0;
    rep.values["d_expected"] = expected;
    rep.flag("d certified", d.verified);
    rep.flag("dG certified", dg.verified);
    rep.check("d = 1 + sqrt5/2", std::max(0.0, std::abs(d.r - expected) - 1e-3));
    rep.check("dG = 2", std::max(0.0, std::abs(dg.r - 2.0) - 1e-3));
    rep.check("d > 2", std::max(0.0, 2.0 - d.r + tol.cert));
    rep.add_body("K", pent);
    rep.add_body("S", tri);
    return rep;
}

}  // namespace bmforge::scenario
