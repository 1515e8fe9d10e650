#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bmforge/common.hpp"
#include "bmforge/nnls.hpp"
#include "bmforge/polygon.hpp"

namespace bmforge {

/// One contact pair: u on the boundary of both bodies, v a common support
/// functional normalized so that <u, v> = 1.
struct ContactPair {
    Point u;
    Direction v;
    double slack_primal = 0.0;  ///< distance of u from the outer boundary
    double slack_dual = 0.0;    ///< |h_K(v) - 1|
};

struct JohnCertificate {
    std::vector<ContactPair> pairs;
    std::vector<double> weights;
    Point recenter;
    double residual_identity = 0.0;
    double residual_u = 0.0;
    double residual_v = 0.0;

    std::size_t size() const { return pairs.size(); }
};

struct JohnReport {
    double identity = 0.0;      ///< operator norm of sum a v u^T - I
    double sum_u = 0.0;
    double sum_v = 0.0;
    double pairing = 0.0;       ///< max |<u, v> - 1|
    double weight_sum = 0.0;    ///< |sum a - 2|
    double min_weight = 0.0;
    double worst = 0.0;
    bool arity_ok = false;      ///< 3 <= m <= 6
    bool passed = false;
};

namespace detail {

struct ContactNormal {
    Point p;
    Direction n;  ///< outward unit normal of the outer body at p
};

// Vertices of the inner body lying on the outer boundary, one entry per
// active outer edge (two at a vertex-vertex contact: the extreme rays of the
// outer normal cone).
inline std::vector<ContactNormal> contact_normals(const ConvexPolygon& inner, const ConvexPolygon& outer, double tol) {
    std::vector<ContactNormal> out;
    for (const auto& p : inner.vertices()) {
        for (std::size_t e = 0; e < outer.size(); ++e) {
            if (std::abs(outer.edge_offset(e) - dot(p, outer.edge_normal(e))) <= tol) out.push_back({p, outer.edge_normal(e)});
        }
    }
    return out;
}

inline double op_norm(const Eigen::Matrix2d& m) { return Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()[0]; }

inline Eigen::Matrix<double, 8, Eigen::Dynamic> john_system(const std::vector<ContactPair>& pairs) {
    Eigen::Matrix<double, 8, Eigen::Dynamic> m(8, static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Point& u = pairs[i].u;
        const Direction& v = pairs[i].v;
        m.col(static_cast<Eigen::Index>(i)) << v.dx * u.x, v.dx * u.y, v.dy * u.x, v.dy * u.y, u.x, u.y, v.dx, v.dy;
    }
    return m;
}

inline Eigen::Matrix<double, 8, 1> john_rhs() {
    Eigen::Matrix<double, 8, 1> r;
    r << 1, 0, 0, 1, 0, 0, 0, 0;
    return r;
}

}  // namespace detail

/// Contact pairs of K inside L. Vertex-vertex contacts yield one pair per
/// extreme ray of the outer normal cone; a shared edge shows up through its
/// two endpoints.
inline std::vector<ContactPair> extract_contacts(const ConvexPolygon& k, const ConvexPolygon& l, double tol,
                                                 const Tolerances& t = {}) {
    require_origin_interior(k, t);
    if (!contains(l, k, tol)) throw Error(ErrorCode::PreconditionViolated, "K is not contained in L");
    std::vector<ContactPair> out;
    for (const auto& c : detail::contact_normals(k, l, tol)) {
        const Direction v = c.n.scaled(1.0 / dot(c.p, c.n));
        bool dup = false;
        for (const auto& q : out) dup |= distance(q.u, c.p) <= t.geom && distance(q.v.as_point(), v.as_point()) <= t.geom;
        if (dup) continue;
        out.push_back({c.p, v, std::abs(point_slack(l, c.p)), std::abs(support(k, v).value - 1.0)});
    }
    if (out.empty()) throw Error(ErrorCode::NoContacts, "K does not touch the boundary of L");
    return out;
}

/// Nonnegative weights with sum a v u^T = I, sum a u = 0, sum a v = 0 and every a >= min_weight.
inline std::vector<double> solve_john_weights(const std::vector<ContactPair>& pairs, const Tolerances& tol = {}) {
    if (pairs.size() < 3) throw Error(ErrorCode::InfeasibleWeights, "fewer than three contact pairs");
    const auto sol = linalg::bounded_least_squares(detail::john_system(pairs), detail::john_rhs(), tol.weight);
    if (!(sol.residual <= tol.cert))
        throw Error(ErrorCode::InfeasibleWeights, "weight residual " + std::to_string(sol.residual));
    return {sol.x.data(), sol.x.data() + sol.x.size()};
}

/// Recomputes every John condition from the stored pairs and weights.
inline JohnReport check_john_certificate(const JohnCertificate& cert, const Tolerances& tol = {}) {
    JohnReport r;
    const std::size_t m = cert.pairs.size();
    r.arity_ok = m >= 3 && m <= 6;
    if (m == 0 || cert.weights.size() != m) {
        r.worst = std::numeric_limits<double>::infinity();
        return r;
    }
    Eigen::Matrix2d s = -Eigen::Matrix2d::Identity();
    Point su, sv;
    double total = 0.0;
    r.min_weight = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double a = cert.weights[i];
        const Point& u = cert.pairs[i].u;
        const Point v = cert.pairs[i].v.as_point();
        s(0, 0) += a * v.x * u.x;
        s(0, 1) += a * v.x * u.y;
        s(1, 0) += a * v.y * u.x;
        s(1, 1) += a * v.y * u.y;
        su += a * u;
        sv += a * v;
        total += a;
        r.pairing = std::max(r.pairing, std::abs(dot(u, v) - 1.0));
        r.min_weight = std::min(r.min_weight, a);
    }
    r.identity = detail::op_norm(s);
    r.sum_u = norm(su);
    r.sum_v = norm(sv);
    r.weight_sum = std::abs(total - 2.0);
    r.worst = std::max({r.identity, r.sum_u, r.sum_v, r.pairing, r.weight_sum});
    r.passed = r.worst <= tol.cert && r.min_weight > 0.0;
    return r;
}

inline void fill_residuals(JohnCertificate& cert) {
    const auto r = check_john_certificate(cert);
    cert.residual_identity = r.identity;
    cert.residual_u = r.sum_u;
    cert.residual_v = r.sum_v;
}

/// Collapses pairs sharing u (or sharing v) into one pair with the weighted
/// mean of the other component. The John sums are unchanged.
inline void merge_pairs(std::vector<ContactPair>& pairs, std::vector<double>& weights, double tol) {
    auto pass = [&](bool by_u) {
        bool changed = false;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            for (std::size_t j = i + 1; j < pairs.size();) {
                const bool same = by_u ? distance(pairs[i].u, pairs[j].u) <= tol
                                       : distance(pairs[i].v.as_point(), pairs[j].v.as_point()) <= tol;
                if (!same) { ++j; continue; }
                const double a = weights[i] + weights[j];
                if (by_u) {
                    const Point v = (weights[i] * pairs[i].v.as_point() + weights[j] * pairs[j].v.as_point()) / a;
                    pairs[i].v = Direction::from(v);
                } else {
                    pairs[i].u = (weights[i] * pairs[i].u + weights[j] * pairs[j].u) / a;
                }
                weights[i] = a;
                pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(j));
                weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
            }
        }
        return changed;
    };
    while (pass(true) || pass(false)) {
    }
}

struct RecenterResult {
    Point z;
    JohnCertificate cert;
};

/// Finds z with K - z in John's position inside L - z, for K in a maximal-volume position in L.
///
/// With b_j = a_j / <p_j - z, n_j> the John conditions become z-free:
/// sum b n p^T = I and sum b n = 0, b >= 0. Any solution then fixes
/// z = sum b <p, n> p / (1 + sum b <p, n>), and the weights follow.
inline RecenterResult recenter_search(const ConvexPolygon& k, const ConvexPolygon& l, const Tolerances& tol = {}) {
    const auto contacts = detail::contact_normals(k, l, tol.geom * std::max(1.0, l.diameter()));
    if (contacts.empty()) throw Error(ErrorCode::NoCertificate, "no contact points: K is not in a maximal position");
    const auto n = static_cast<Eigen::Index>(contacts.size());
    Eigen::MatrixXd m(6, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& c = contacts[static_cast<std::size_t>(j)];
        m.col(j) << c.n.dx * c.p.x, c.n.dx * c.p.y, c.n.dy * c.p.x, c.n.dy * c.p.y, c.n.dx, c.n.dy;
    }
    Eigen::VectorXd rhs(6);
    rhs << 1, 0, 0, 1, 0, 0;
    const auto sol = linalg::bounded_least_squares(m, rhs, 0.0);
    if (!(sol.residual <= tol.cert))
        throw Error(ErrorCode::NoCertificate, "no John decomposition at any center, residual " + std::to_string(sol.residual));

    auto build = [&](const Eigen::VectorXd& b) {
        double sbc = 0.0;
        Point sbcp;
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& c = contacts[static_cast<std::size_t>(j)];
            const double cj = dot(c.p, c.n);
            sbc += b[j] * cj;
            sbcp += b[j] * cj * c.p;
        }
        RecenterResult res;
        res.z = sbcp / (1.0 + sbc);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& c = contacts[static_cast<std::size_t>(j)];
            const double h = dot(c.p - res.z, c.n);
            const double a = b[j] * h;
            if (a < tol.weight) continue;
            res.cert.pairs.push_back({c.p - res.z, c.n.scaled(1.0 / h), 0.0, 0.0});
            res.cert.weights.push_back(a);
        }
        merge_pairs(res.cert.pairs, res.cert.weights, tol.geom);
        res.cert.recenter = res.z;
        return res;
    };

    RecenterResult res = build(sol.x);
    if (res.cert.size() > 6) res = build(linalg::caratheodory_reduce(m, sol.x));

    const ConvexPolygon k0 = translate(k, -res.z), l0 = translate(l, -res.z);
    for (auto& p : res.cert.pairs) {
        p.slack_primal = std::abs(point_slack(l0, p.u));
        p.slack_dual = std::abs(support(k0, p.v).value - 1.0);
    }
    fill_residuals(res.cert);
    const auto report = check_john_certificate(res.cert, tol);
    if (!report.passed)
        throw Error(ErrorCode::NoCertificate, "recentred certificate fails, worst residual " + std::to_string(report.worst));
    return res;
}

struct TriplePairReport {
    bool passed = false;
    double weight_deviation = 0.0;  ///< max |a_i - 2/3|
    double cross_deviation = 0.0;   ///< max over i != j of |<u_i, v_j> + 1/2|
    double cross[3][3] = {};        ///< <u_i, v_j>
};

/// Rigidity of three-pair certificates: equal weights 2/3 and <u_i, v_j> = -1/2.
inline TriplePairReport triple_pair_check(const JohnCertificate& cert, const Tolerances& tol = {}) {
    if (cert.size() != 3 || cert.weights.size() != 3)
        throw Error(ErrorCode::WrongArity, "expected 3 contact pairs, got " + std::to_string(cert.size()));
    TriplePairReport r;
    for (std::size_t i = 0; i < 3; ++i) {
        r.weight_deviation = std::max(r.weight_deviation, std::abs(cert.weights[i] - 2.0 / 3.0));
        for (std::size_t j = 0; j < 3; ++j) {
            r.cross[i][j] = dot(cert.pairs[i].u, cert.pairs[j].v);
            if (i != j) r.cross_deviation = std::max(r.cross_deviation, std::abs(r.cross[i][j] + 0.5));
        }
    }
    r.passed = r.weight_deviation <= tol.cert && r.cross_deviation <= tol.cert;
    return r;
}

struct GlmpResult {
    bool holds = false;
    double slack = 0.0;              ///< containment slack of L - z in -2(K - z)
    std::vector<Point> contacts;     ///< boundary coincidences, recentered frame
    std::optional<int> s;            ///< number of contacts; empty when a segment is shared
};

/// Checks L - z inside -2(K - z) for a valid certificate and lists where the boundaries meet.
inline GlmpResult check_glmp(const ConvexPolygon& k, const ConvexPolygon& l, const JohnCertificate& cert,
                             const Tolerances& tol = {}) {
    const auto report = check_john_certificate(cert, tol);
    if (!report.passed) throw Error(ErrorCode::CertificateInvalid, "certificate residual " + std::to_string(report.worst));
    const ConvexPolygon l0 = translate(l, -cert.recenter);
    const ConvexPolygon big = scale_negate(translate(k, -cert.recenter), 2.0);
    GlmpResult r;
    r.slack = containment_slack(big, l0);
    r.holds = r.slack >= -tol.cert;

    auto add = [&](const Point& q) {
        for (const auto& c : r.contacts)
            if (distance(c, q) <= tol.cert) return;
        r.contacts.push_back(q);
    };
    for (const auto& q : l0.vertices())
        if (std::abs(point_slack(big, q)) <= tol.cert) add(q);
    for (const auto& q : big.vertices())
        if (std::abs(point_slack(l0, q)) <= tol.cert) add(q);

    // Two contacts on a common supporting line of both bodies bound a shared segment.
    auto common_line = [&](const Point& p, const Point& q) {
        for (std::size_t e = 0; e < l0.size(); ++e) {
            const Direction n = l0.edge_normal(e);
            const double h = l0.edge_offset(e);
            if (std::abs(dot(p, n) - h) > tol.cert || std::abs(dot(q, n) - h) > tol.cert) continue;
            if (std::abs(support(big, n).value - h) <= tol.cert) return true;
        }
        return false;
    };
    bool segment = false;
    for (std::size_t i = 0; i < r.contacts.size() && !segment; ++i)
        for (std::size_t j = i + 1; j < r.contacts.size() && !segment; ++j) segment = common_line(r.contacts[i], r.contacts[j]);
    if (!segment) r.s = static_cast<int>(r.contacts.size());
    return r;
}

/// True when no u_i lies in the hull of the other u's and likewise for the v's.
inline bool is_irredundant(const std::vector<ContactPair>& pairs, double tol) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::vector<Point> us, vs;
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            if (j == i) continue;
            us.push_back(pairs[j].u);
            vs.push_back(pairs[j].v.as_point());
        }
        if (hull_distance(pairs[i].u, us, tol) <= tol) return false;
        if (hull_distance(pairs[i].v.as_point(), vs, tol) <= tol) return false;
    }
    return true;
}

struct IrredundantResult {
    std::vector<ContactPair> pairs;
    std::vector<double> weights;
};

/// Drops pairs whose u (or v) sits in the hull of the rest while keeping the
/// weights feasible. Greedy first, exhaustive over subsets if greedy gets stuck.
inline IrredundantResult irredundant_pairs(const std::vector<ContactPair>& pairs, const Tolerances& tol = {}) {
    if (pairs.size() < 3) throw Error(ErrorCode::InfeasibleWeights, "fewer than three contact pairs");
    auto try_solve = [&](const std::vector<ContactPair>& ps) -> std::optional<std::vector<double>> {
        try {
            return solve_john_weights(ps, tol);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    auto redundant = [&](const std::vector<ContactPair>& ps, std::size_t i) {
        std::vector<Point> us, vs;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            us.push_back(ps[j].u);
            vs.push_back(ps[j].v.as_point());
        }
        return hull_distance(ps[i].u, us, tol.geom) <= tol.geom || hull_distance(ps[i].v.as_point(), vs, tol.geom) <= tol.geom;
    };

    std::vector<ContactPair> cur = pairs;
    if (auto w = try_solve(cur)) {
        merge_pairs(cur, *w, tol.geom);
    }
    bool progress = true;
    while (progress && cur.size() > 3) {
        progress = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (!redundant(cur, i)) continue;
            auto next = cur;
            next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
            if (try_solve(next)) {
                cur = std::move(next);
                progress = true;
                break;
            }
        }
    }
    if (is_irredundant(cur, tol.geom)) {
        if (auto w = try_solve(cur)) return {cur, *w};
    }

    // Exhaustive: largest feasible irredundant subset, lowest index mask first.
    const std::size_t m = pairs.size();
    if (m > 16) throw Error(ErrorCode::InfeasibleWeights, "no feasible irredundant subset found");
    std::optional<IrredundantResult> best;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        const auto count = static_cast<std::size_t>(__builtin_popcount(mask));
        if (count < 3 || (best && count <= best->pairs.size())) continue;
        std::vector<ContactPair> sub;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) sub.push_back(pairs[i]);
        if (!is_irredundant(sub, tol.geom)) continue;
        if (auto w = try_solve(sub)) best = IrredundantResult{sub, *w};
    }
    if (!best) throw Error(ErrorCode::InfeasibleWeights, "no feasible irredundant subset found");
    return *best;
}

struct EqualityConditionsReport {
    Point x;
    Direction w;                    ///< minimizer of <x, .> over the polar of K - z, scaled to <x, w> = -2
    std::vector<std::size_t> setA;  ///< <u_i, w> < 1
    std::vector<std::size_t> setB;  ///< <u_i, w> = 1
    bool holds_convu = false;       ///< -x/2 in conv{u_i : i in B}
    bool holds_convv = false;       ///< -w/2 in conv{v_i : i in A}
    bool holds_xv = false;          ///< <x, v_i> = 1 for i in A
    double worst_violation = 0.0;
    bool collinear_triple = false;  ///< |A| >= 3 or |B| >= 3
    double collinearity_residual = 0.0;
};

/// Evaluates the equality-case conditions at a point x of the boundary of both L - z and -2(K - z).
/// x is given in the recentered frame. One report per minimizing w (two when an edge of the polar attains it).
inline std::vector<EqualityConditionsReport> equality_conditions(const ConvexPolygon& k, const ConvexPolygon& l,
                                                                 const JohnCertificate& cert, const Point& x,
                                                                 const Tolerances& tol = {}) {
    const ConvexPolygon k0 = translate(k, -cert.recenter);
    const ConvexPolygon l0 = translate(l, -cert.recenter);
    require_origin_interior(k0, tol);
    if (std::abs(point_slack(l0, x)) > tol.cert) throw Error(ErrorCode::NotAContactPoint, "x is not on the boundary of L");

    std::vector<Point> ws;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < k0.size(); ++e) {
        ws.push_back(k0.edge_normal(e).as_point() / k0.edge_offset(e));
        lowest = std::min(lowest, dot(x, ws.back()));
    }
    if (lowest > -2.0 + tol.cert) throw Error(ErrorCode::NotAContactPoint, "x is not on the boundary of -2K");

    std::vector<EqualityConditionsReport> out;
    for (const auto& w0 : ws) {
        if (dot(x, w0) > lowest + tol.cert) continue;
        EqualityConditionsReport r;
        r.x = x;
        const Point w = w0 * (-2.0 / dot(x, w0));
        r.w = Direction::from(w);
        std::vector<Point> ub, va;
        double xv = 0.0;
        for (std::size_t i = 0; i < cert.pairs.size(); ++i) {
            const auto& p = cert.pairs[i];
            if (dot(p.u, w) < 1.0 - tol.cert) {
                r.setA.push_back(i);
                va.push_back(p.v.as_point());
                xv = std::max(xv, std::abs(dot(x, p.v) - 1.0));
            } else {
                r.setB.push_back(i);
                ub.push_back(p.u);
                r.collinearity_residual = std::max(r.collinearity_residual, std::abs(dot(p.u, w) - 1.0));
            }
        }
        const double du = hull_distance(-x / 2.0, ub, tol.geom);
        const double dv = hull_distance(-w / 2.0, va, tol.geom);
        r.holds_convu = du <= tol.cert;
        r.holds_convv = dv <= tol.cert;
        r.holds_xv = xv <= tol.cert;
        r.worst_violation = std::max({du, dv, xv});
        r.collinear_triple = r.setA.size() >= 3 || r.setB.size() >= 3;
        if (r.setA.size() >= 3) r.collinearity_residual = std::max(r.collinearity_residual, xv);
        out.push_back(std::move(r));
    }
    return out;
}

struct DualHullResult {
    bool holds = false;             ///< 0 lies in the hull of the common dual contact points
    std::vector<Point> points;      ///< common support functionals with value 1 on both bodies
    double distance = std::numeric_limits<double>::infinity();
};

/// Whether 0 lies in the convex hull of the points shared by the polar boundaries of K and L.
/// When it does not, a strictly smaller translate of L still contains K.
inline DualHullResult dual_contact_hull_check(const ConvexPolygon& k, const ConvexPolygon& l, const Tolerances& tol = {}) {
    require_origin_interior(k, tol);
    const double scale = std::max(1.0, l.diameter());
    if (!contains(l, k, tol.geom * scale)) throw Error(ErrorCode::PreconditionViolated, "K is not contained in L");
    DualHullResult r;
    for (const auto& c : detail::contact_normals(k, l, tol.geom * scale)) {
        const Point w = c.n.as_point() / dot(c.p, c.n);
        bool dup = false;
        for (const auto& q : r.points) dup |= distance(q, w) <= tol.geom;
        if (!dup) r.points.push_back(w);
    }
    if (r.points.empty()) return r;
    r.distance = hull_distance(Point{}, r.points, tol.geom);
    r.holds = r.distance <= tol.geom;
    return r;
}

}  // namespace bmforge
