#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bmforge/generators.hpp"
#include "bmforge/lp.hpp"
#include "bmforge/optimize.hpp"
#include "bmforge/polygon.hpp"

namespace bmforge {

/// Witness K + u inside T(L + v) inside sign * r * (K + u), homotheties about the origin.
struct DistanceReport {
    double r = std::numeric_limits<double>::infinity();
    int sign = 1;
    AffineMap map;          ///< T, linear
    Point shift_inner;      ///< u
    Point shift_outer;      ///< v
    bool verified = false;
    int restarts_used = 0;
    std::vector<double> objective_history;  ///< running best after each start
};

struct DistanceOptions {
    int restarts = 64;              ///< random starts on top of the identity and vertex matchings
    std::uint64_t seed = 0;
    std::size_t screen_evals = 100; ///< pattern-search budget for every start
    int finalists = 8;              ///< best screened starts passed to the LP refinement
    int refine_iters = 60;          ///< sequential LP steps per finalist
    int max_matchings = 240;
    Tolerances tol;
};

/// Checks both inclusions of a sandwich witness directly.
inline bool certify_sandwich(const ConvexPolygon& k, const ConvexPolygon& l, const AffineMap& t, const Point& u,
                             const Point& v, double r, int sign, const Tolerances& tol = {}) {
    if (!(std::abs(t.det()) > tol.det) || !std::isfinite(r) || !(r >= 1.0 - tol.cert) || (sign != 1 && sign != -1))
        return false;
    const ConvexPolygon inner = translate(k, u);
    const ConvexPolygon mid = apply_affine(t, translate(l, v), tol);
    const ConvexPolygon outer = scaled(inner, sign * r);
    const double slack = tol.cert * std::max(1.0, mid.diameter());
    return contains(mid, inner, slack) && contains(outer, mid, slack);
}

inline bool certify_sandwich(const ConvexPolygon& k, const ConvexPolygon& l, const DistanceReport& rep,
                             const Tolerances& tol = {}) {
    return certify_sandwich(k, l, rep.map, rep.shift_inner, rep.shift_outer, rep.r, rep.sign, tol);
}

/// Chains a witness for (K, L) with one for (L, M) into a witness for (K, M)
/// at ratio r1 r2 and sign s1 s2. The result is not certified here.
inline DistanceReport compose_witnesses(const DistanceReport& kl, const DistanceReport& lm) {
    // K + u1 in T1 T2 (M + v2) + T1 (v1 - u2) in s r (K + u1) + c, c = (s2 r2 - 1) T1 (u2 - v1)
    DistanceReport out;
    out.sign = kl.sign * lm.sign;
    out.r = kl.r * lm.r;
    out.map = kl.map.compose(lm.map);
    const Point drift = kl.map.apply_linear(kl.shift_outer - lm.shift_inner);
    const Point c = (lm.sign * lm.r - 1.0) * kl.map.apply_linear(lm.shift_inner - kl.shift_outer);
    const double denom = 1.0 - out.sign * out.r;
    const Point z = std::abs(denom) > 1e-12 ? c / denom : Point{0.0, 0.0};
    out.shift_inner = kl.shift_inner - z;
    out.shift_outer = lm.shift_outer + out.map.inverse().apply_linear(drift - z);
    return out;
}

namespace detail {

inline void normalize_params(opt::Vec& x) {
    const double det = std::abs(x[0] * x[3] - x[1] * x[2]);
    if (!(det > 0.0) || !std::isfinite(det)) return;
    const double s = 1.0 / std::sqrt(det);
    for (auto& xi : x) xi *= s;
}

// For a fixed linear part A the best sandwich is a linear program in
// (alpha, t, w, r) with P = K - c_K and Q = A (L - c_L):
//   P inside alpha Q + t      one row per edge of Q
//   alpha Q + t inside sign r P + w   one row per edge of P
// minimizing r. The value depends on A only up to scale.
class SandwichObjective {
public:
    SandwichObjective(const ConvexPolygon& k, const ConvexPolygon& l)
        : ck_(centroid(k)), cl_(centroid(l)) {
        for (const auto& p : k.vertices()) p_.push_back(p - ck_);
        const ConvexPolygon p0 = translate(k, -ck_);
        for (std::size_t e = 0; e < p0.size(); ++e) {
            pn_.push_back(p0.edge_normal(e).as_point());
            ph_.push_back(p0.edge_offset(e));
        }
        for (const auto& q : l.vertices()) l0_.push_back(q - cl_);
        const ConvexPolygon q0 = translate(l, -cl_);
        for (std::size_t f = 0; f < q0.size(); ++f) {
            ln_.push_back(q0.edge_normal(f).as_point());
            lh_.push_back(q0.edge_offset(f));
        }
        q_.resize(l0_.size());
        const auto rows = static_cast<Eigen::Index>(l0_.size() + p_.size());
        g_.setZero(rows, 6);
        b_.setZero(rows);
        c_.setZero(6);
        c_[5] = 1.0;
    }

    Point k_center() const { return ck_; }
    Point l_center() const { return cl_; }

    double operator()(const opt::Vec& a, int sign) const {
        const linalg::LpResult res = solve(a, sign);
        return res.ok ? res.value : std::numeric_limits<double>::infinity();
    }

    linalg::LpResult solve(const opt::Vec& a, int sign) const {
        linalg::LpResult fail;
        const double det = a[0] * a[3] - a[1] * a[2];
        if (!(std::abs(det) > 1e-12) || !std::isfinite(det)) return fail;
        for (std::size_t i = 0; i < l0_.size(); ++i) {
            const Point& s = l0_[i];
            q_[i] = {a[0] * s.x + a[1] * s.y, a[2] * s.x + a[3] * s.y};
        }
        const double orient = det > 0 ? 1.0 : -1.0;
        const std::size_t nq = q_.size();
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < nq; ++i, ++row) {
            const Point& u = q_[i];
            const Point& v = q_[(i + 1) % nq];
            Point m{orient * (v.y - u.y), orient * (u.x - v.x)};
            const double len = std::hypot(m.x, m.y);
            m = m / len;
            const double off = m.x * u.x + m.y * u.y;
            double hp = -std::numeric_limits<double>::infinity();
            for (const auto& p : p_) hp = std::max(hp, p.x * m.x + p.y * m.y);
            // -alpha off - <t, m> <= -h_P(m)
            g_.row(row) << -off, -m.x, -m.y, 0.0, 0.0, 0.0;
            b_[row] = -hp;
        }
        for (std::size_t e = 0; e < pn_.size(); ++e, ++row) {
            const Point n = sign * pn_[e];
            double hq = -std::numeric_limits<double>::infinity();
            for (const auto& q : q_) hq = std::max(hq, q.x * n.x + q.y * n.y);
            // alpha h_Q(sign n) + <t - w, sign n> - r h_P(n) <= 0
            g_.row(row) << hq, n.x, n.y, -n.x, -n.y, -ph_[e];
            b_[row] = 0.0;
        }
        return linalg::solve_lp(g_, b_, c_);
    }

    /// Sequential LP descent on the linear part. With M = alpha A and
    /// N = M^{-1}, the inner inclusion reads <N (p - t), l_f> <= g_f for the
    /// edges (l_f, g_f) of L - c_L; it is linearized at the current (M, t)
    /// while the outer inclusion stays exact. Steps are kept in a box trust
    /// region on M and accepted on decrease of the exact value.
    std::pair<opt::Vec, double> refine(opt::Vec a, int sign, int iters) const {
        linalg::LpResult cur = solve(a, sign);
        if (!cur.ok) return {a, std::numeric_limits<double>::infinity()};
        const std::size_t np = p_.size(), nl = l0_.size(), ne = pn_.size(), nf = ln_.size();
        const auto rows = static_cast<Eigen::Index>(np * nf + nl * ne + 8);
        Eigen::MatrixXd g(rows, 9);
        Eigen::VectorXd b(rows), c = Eigen::VectorXd::Zero(9);
        c[8] = 1.0;
        double radius = 0.1;
        for (int it = 0; it < iters && radius > 1e-11; ++it) {
            const double alpha = cur.x[0];
            Eigen::Matrix2d m;
            m << alpha * a[0], alpha * a[1], alpha * a[2], alpha * a[3];
            const Eigen::Vector2d t0(cur.x[1], cur.x[2]);
            const Eigen::Matrix2d n = m.inverse();
            g.setZero();
            Eigen::Index row = 0;
            for (std::size_t f = 0; f < nf; ++f) {
                const Eigen::Vector2d lf(ln_[f].x, ln_[f].y);
                const Eigen::Vector2d av = n.transpose() * lf;
                for (std::size_t i = 0; i < np; ++i, ++row) {
                    const Eigen::Vector2d bv = n * (Eigen::Vector2d(p_[i].x, p_[i].y) - t0);
                    // y(M, t) ~ y0 - a^T dM b - a^T dt
                    const double y0 = lf.dot(bv);
                    g(row, 0) = -av[0] * bv[0];
                    g(row, 1) = -av[0] * bv[1];
                    g(row, 2) = -av[1] * bv[0];
                    g(row, 3) = -av[1] * bv[1];
                    g(row, 4) = -av[0];
                    g(row, 5) = -av[1];
                    const double lin0 = g(row, 0) * m(0, 0) + g(row, 1) * m(0, 1) + g(row, 2) * m(1, 0) +
                                        g(row, 3) * m(1, 1) + g(row, 4) * t0[0] + g(row, 5) * t0[1];
                    b[row] = lh_[f] - y0 + lin0;
                }
            }
            for (std::size_t j = 0; j < nl; ++j) {
                for (std::size_t e = 0; e < ne; ++e, ++row) {
                    const Point nv = sign * pn_[e];
                    g.row(row) << nv.x * l0_[j].x, nv.x * l0_[j].y, nv.y * l0_[j].x, nv.y * l0_[j].y, nv.x, nv.y,
                        -nv.x, -nv.y, -ph_[e];
                    b[row] = 0.0;
                }
            }
            const double scale = m.cwiseAbs().maxCoeff();
            for (int k = 0; k < 4; ++k) {
                g(row, k) = 1.0;
                b[row++] = m(k / 2, k % 2) + radius * scale;
                g(row, k) = -1.0;
                b[row++] = -m(k / 2, k % 2) + radius * scale;
            }
            const linalg::LpResult step = linalg::solve_lp(g, b, c);
            if (!step.ok) { radius *= 0.25; continue; }
            opt::Vec trial{step.x[0], step.x[1], step.x[2], step.x[3]};
            normalize_params(trial);
            const linalg::LpResult next = solve(trial, sign);
            if (next.ok && next.value < cur.value - 1e-13) {
                a = trial;
                cur = next;
                radius = std::min(0.5, radius * 2.0);
            } else {
                radius *= 0.25;
            }
        }
        return {a, cur.value};
    }

    /// Converts an optimal linear part into an explicit witness.
    DistanceReport witness(const opt::Vec& a, int sign) const {
        DistanceReport rep;
        rep.sign = sign;
        const linalg::LpResult res = solve(a, sign);
        if (!res.ok) return rep;
        const double alpha = res.x[0];
        const Point t{res.x[1], res.x[2]}, w{res.x[3], res.x[4]};
        rep.r = res.x[5];
        // P inside alpha Q + t inside sign r P + w. Move the homothety centre
        // z = w / (1 - sign r) to the origin; at r = 1, sign = 1, w vanishes.
        const double denom = 1.0 - sign * rep.r;
        const Point z = std::abs(denom) > 1e-9 ? w / denom : Point{0.0, 0.0};
        rep.map = AffineMap::linear(alpha * a[0], alpha * a[1], alpha * a[2], alpha * a[3]);
        rep.shift_inner = -ck_ - z;
        rep.shift_outer = rep.map.inverse().apply_linear(t - z) - cl_;
        return rep;
    }

private:
    Point ck_, cl_;
    std::vector<Point> p_, pn_, l0_, ln_;
    std::vector<double> ph_, lh_;
    mutable std::vector<Point> q_;
    mutable Eigen::MatrixXd g_;
    mutable Eigen::VectorXd b_;
    Eigen::VectorXd c_;
};

// Linear parts of the maps taking three consecutive L vertices onto three
// consecutive K vertices, in both orientations.
inline std::vector<opt::Vec> matching_starts(const ConvexPolygon& k, const ConvexPolygon& l, int cap) {
    std::vector<opt::Vec> out;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = 0; j < k.size(); ++j) {
            for (const bool flip : {false, true}) {
                const Point src[3] = {l[i], l[i + 1], l[i + 2]};
                const Point dst[3] = {k[j], flip ? k[j + k.size() - 1] : k[j + 1], flip ? k[j + k.size() - 2] : k[j + 2]};
                const double area_src = cross(src[0], src[1], src[2]);
                const double area_dst = cross(dst[0], dst[1], dst[2]);
                if (std::abs(area_src) < 1e-12 || std::abs(area_dst) < 1e-12) continue;
                const AffineMap m = AffineMap::from_triangles(src, dst);
                opt::Vec x{m.m11, m.m12, m.m21, m.m22};
                normalize_params(x);
                out.push_back(std::move(x));
            }
        }
    }
    if (static_cast<int>(out.size()) > cap) {
        std::vector<opt::Vec> thin;
        for (int i = 0; i < cap; ++i) thin.push_back(out[out.size() * static_cast<std::size_t>(i) / static_cast<std::size_t>(cap)]);
        out.swap(thin);
    }
    return out;
}

inline opt::Vec random_start(std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const double stretch = std::exp(unit(rng) - 0.5);
    const double shear = 1.2 * (unit(rng) - 0.5);
    AffineMap m = AffineMap::rotation(theta).compose(AffineMap::linear(stretch, shear, 0.0, 1.0 / stretch));
    if (unit(rng) < 0.5) m = m.compose(AffineMap::linear(1.0, 0.0, 0.0, -1.0));
    opt::Vec x{m.m11, m.m12, m.m21, m.m22};
    normalize_params(x);
    return x;
}

struct Candidate {
    opt::Vec x;
    double value = std::numeric_limits<double>::infinity();
    int index = 0;
};

inline bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
}

inline DistanceReport optimize_branch(const ConvexPolygon& k, const ConvexPolygon& l, int sign,
                                      const DistanceOptions& o) {
    const SandwichObjective obj(k, l);
    const opt::Objective f = [&](const opt::Vec& x) { return obj(x, sign); };

    std::vector<opt::Vec> starts{{1.0, 0.0, 0.0, 1.0}};
    for (auto& x : matching_starts(k, l, o.max_matchings)) starts.push_back(std::move(x));
    for (int i = 0; i < o.restarts; ++i) starts.push_back(random_start(o.seed, i));

    std::vector<double> history;
    std::vector<Candidate> pool;
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < starts.size(); ++i) {
        // each start draws its polling bases from its own stream
        std::mt19937_64 rng(o.seed * 0x9E3779B97F4A7C15ull + i);
        opt::PatternSearchOptions po;
        po.max_evals = o.screen_evals;
        auto res = opt::pattern_search(f, starts[i], f(starts[i]), po, rng, normalize_params);
        running = std::min(running, res.value);
        history.push_back(running);
        pool.push_back({res.x, res.value, static_cast<int>(i)});
    }
    std::sort(pool.begin(), pool.end(), candidate_less);
    pool.resize(std::min(pool.size(), static_cast<std::size_t>(std::max(1, o.finalists))));
    for (auto& c : pool) {
        if (!std::isfinite(c.value)) continue;
        auto [x, value] = obj.refine(c.x, sign, o.refine_iters);
        if (value < c.value) {
            c.x = std::move(x);
            c.value = value;
        }
        running = std::min(running, c.value);
        history.push_back(running);
    }
    std::sort(pool.begin(), pool.end(), candidate_less);

    for (const auto& c : pool) {
        if (!std::isfinite(c.value)) continue;
        DistanceReport rep = obj.witness(c.x, sign);
        rep.verified = certify_sandwich(k, l, rep, o.tol);
        rep.restarts_used = static_cast<int>(starts.size());
        rep.objective_history = history;
        if (rep.verified) return rep;
    }
    throw Error(ErrorCode::NonConverged, "no start produced a certified sandwich");
}

}  // namespace detail

/// Upper bound on the Banach-Mazur distance with an explicit certified witness.
inline DistanceReport banach_mazur_distance(const ConvexPolygon& k, const ConvexPolygon& l, const DistanceOptions& o = {}) {
    return detail::optimize_branch(k, l, 1, o);
}

/// Upper bound on the Grünbaum distance: the better of the positive and negative homothety branches.
inline DistanceReport grunbaum_distance(const ConvexPolygon& k, const ConvexPolygon& l, const DistanceOptions& o = {}) {
    DistanceReport pos = detail::optimize_branch(k, l, 1, o);
    DistanceReport neg = detail::optimize_branch(k, l, -1, o);
    DistanceReport& win = neg.r < pos.r ? neg : pos;
    win.restarts_used = pos.restarts_used + neg.restarts_used;
    return win;
}

struct SearchConfig {
    std::vector<std::pair<gen::PolygonClass, gen::PolygonClass>> classes{
        {gen::PolygonClass::Quadrilateral, gen::PolygonClass::Pentagon},
        {gen::PolygonClass::Quadrilateral, gen::PolygonClass::Quadrilateral},
        {gen::PolygonClass::Pentagon, gen::PolygonClass::SymmetricHexagon}};
    int budget = 100;
    std::uint64_t seed = 0;
    double epsilon = 0.05;  ///< report threshold below 2
    bool grunbaum = true;
    DistanceOptions distance;
};

struct SearchCandidate {
    ConvexPolygon k;
    ConvexPolygon l;
    std::string k_class;
    std::string l_class;
    double estimate = 0.0;
    bool verified = false;
    bool flagged = false;  ///< estimate > 2 - epsilon with neither body a triangle
    int sample = 0;
};

/// Samples pairs from the configured classes, estimates their distance and
/// ranks them by closeness to 2. Heuristic probe; flags are for human review.
inline std::vector<SearchCandidate> extremal_pair_search(const SearchConfig& cfg) {
    std::vector<SearchCandidate> out;
    if (cfg.budget <= 0 || cfg.classes.empty()) return out;
    for (int i = 0; i < cfg.budget; ++i) {
        const auto& [ck, cl] = cfg.classes[static_cast<std::size_t>(i) % cfg.classes.size()];
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(i), 0x5eedu};
        std::mt19937_64 rng(seq);
        ConvexPolygon k = gen::sample(rng, ck);
        ConvexPolygon l = gen::sample(rng, cl);
        DistanceOptions o = cfg.distance;
        o.seed = cfg.seed + static_cast<std::uint64_t>(i);
        const DistanceReport rep = cfg.grunbaum ? grunbaum_distance(k, l, o) : banach_mazur_distance(k, l, o);
        const bool triangle = k.size() == 3 || l.size() == 3;
        out.push_back({std::move(k), std::move(l), std::string(gen::to_string(ck)), std::string(gen::to_string(cl)),
                       rep.r, rep.verified, !triangle && rep.r > 2.0 - cfg.epsilon, i});
    }
    std::stable_sort(out.begin(), out.end(), [](const SearchCandidate& a, const SearchCandidate& b) {
        return std::abs(a.estimate - 2.0) < std::abs(b.estimate - 2.0);
    });
    return out;
}

}  // namespace bmforge
