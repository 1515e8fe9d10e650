#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bmforge/nnls.hpp"
#include "bmforge/polygon.hpp"
#include "bmforge/sandwich.hpp"

namespace bmforge {

struct MaxVolumeOptions {
    int rotations = 12;             ///< starting rotations per orientation
    double mu_start = 1.0;
    double mu_final = 1e-9;
    double active_tol = 1e-6;       ///< slack below which a constraint enters the KKT polish
    double mu_factor = 0.1;
    int newton_iters = 80;          ///< per barrier level
    double gradient_tol = 1e-8;
};

struct MaxVolumeResult {
    AffineMap map;                  ///< K' = map(K) is the maximal-volume image inside L
    double det = 0.0;               ///< |det| of the linear part
    double stationarity = 0.0;      ///< KKT residual |grad(-log det) + G^T lambda| with lambda >= 0
    int start_index = -1;
    int newton_steps = 0;
};

namespace detail {

// x = (A11, A12, A21, A22, t1, t2); slack s = h - g.x with g built from (n, k).
struct BarrierProblem {
    std::vector<Eigen::Matrix<double, 6, 1>> g;
    std::vector<double> h;

    BarrierProblem(const ConvexPolygon& k, const ConvexPolygon& l) {
        for (std::size_t e = 0; e < l.size(); ++e) {
            const Direction n = l.edge_normal(e);
            for (const auto& q : k.vertices()) {
                Eigen::Matrix<double, 6, 1> row;
                row << n.dx * q.x, n.dx * q.y, n.dy * q.x, n.dy * q.y, n.dx, n.dy;
                g.push_back(row);
                h.push_back(l.edge_offset(e));
            }
        }
    }

    bool slacks(const Eigen::Matrix<double, 6, 1>& x, Eigen::VectorXd& s) const {
        s.resize(static_cast<Eigen::Index>(g.size()));
        for (std::size_t c = 0; c < g.size(); ++c) {
            s[static_cast<Eigen::Index>(c)] = h[c] - g[c].dot(x);
            if (!(s[static_cast<Eigen::Index>(c)] > 0.0)) return false;
        }
        return true;
    }

    double value(const Eigen::Matrix<double, 6, 1>& x, double mu) const {
        Eigen::VectorXd s;
        if (!slacks(x, s)) return std::numeric_limits<double>::infinity();
        const double det = x[0] * x[3] - x[1] * x[2];
        if (det == 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(std::abs(det)) - mu * s.array().log().sum();
    }

    void derivatives(const Eigen::Matrix<double, 6, 1>& x, double mu, Eigen::Matrix<double, 6, 1>& grad,
                     Eigen::Matrix<double, 6, 6>& hess) const {
        Eigen::Matrix2d a;
        a << x[0], x[1], x[2], x[3];
        const Eigen::Matrix2d inv = a.inverse();
        grad.setZero();
        hess.setZero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                grad[2 * i + j] = -inv(j, i);
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) hess(2 * i + j, 2 * k + l) = inv(j, k) * inv(l, i);
            }
        if (mu == 0.0) return;
        for (std::size_t c = 0; c < g.size(); ++c) {
            const double s = h[c] - g[c].dot(x);
            grad += (mu / s) * g[c];
            hess += (mu / (s * s)) * g[c] * g[c].transpose();
        }
    }
};

struct NewtonOutcome {
    Eigen::Matrix<double, 6, 1> x;
    double grad_norm = 0.0;
    int steps = 0;
};

inline NewtonOutcome barrier_descent(const BarrierProblem& prob, Eigen::Matrix<double, 6, 1> x,
                                     const MaxVolumeOptions& o) {
    NewtonOutcome out;
    Eigen::Matrix<double, 6, 1> grad;
    Eigen::Matrix<double, 6, 6> hess;
    for (double mu = o.mu_start; mu >= o.mu_final * 0.999; mu *= o.mu_factor) {
        double f = prob.value(x, mu);
        for (int it = 0; it < o.newton_iters; ++it) {
            prob.derivatives(x, mu, grad, hess);
            out.grad_norm = grad.norm();
            // Levenberg shift until the model is convex and the step descends.
            Eigen::Matrix<double, 6, 1> d;
            double lambda = 0.0;
            const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
            for (int tries = 0; tries < 40; ++tries) {
                Eigen::LLT<Eigen::Matrix<double, 6, 6>> llt(hess + lambda * Eigen::Matrix<double, 6, 6>::Identity());
                if (llt.info() == Eigen::Success) {
                    d = llt.solve(-grad);
                    if (d.allFinite() && grad.dot(d) < 0.0) break;
                }
                lambda = (lambda == 0.0) ? 1e-10 * scale : lambda * 10.0;
            }
            const double decrement = -grad.dot(d);
            if (!(decrement > 1e-24)) break;
            double step = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                const Eigen::Matrix<double, 6, 1> trial = x + step * d;
                const double ft = prob.value(trial, mu);
                if (ft <= f - 1e-4 * step * decrement) {
                    x = trial;
                    f = ft;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            ++out.steps;
            if (!moved || decrement < 1e-22) break;
        }
    }
    out.x = x;
    return out;
}

inline Eigen::Matrix<double, 6, 1> logdet_gradient(const Eigen::Matrix<double, 6, 1>& x) {
    Eigen::Matrix<double, 6, 1> grad = Eigen::Matrix<double, 6, 1>::Zero();
    const double det = x[0] * x[3] - x[1] * x[2];
    grad[0] = -x[3] / det;
    grad[1] = x[2] / det;
    grad[2] = x[1] / det;
    grad[3] = -x[0] / det;
    return grad;
}

// Best nonnegative multipliers on the near-active set; returns the residual norm.
inline double kkt_residual(const BarrierProblem& prob, const Eigen::Matrix<double, 6, 1>& x, double active_tol) {
    std::vector<std::size_t> act;
    for (std::size_t c = 0; c < prob.g.size(); ++c)
        if (prob.h[c] - prob.g[c].dot(x) < active_tol) act.push_back(c);
    const Eigen::Matrix<double, 6, 1> grad = logdet_gradient(x);
    if (act.empty()) return grad.norm();
    Eigen::MatrixXd gt(6, static_cast<Eigen::Index>(act.size()));
    for (std::size_t j = 0; j < act.size(); ++j) gt.col(static_cast<Eigen::Index>(j)) = prob.g[act[j]];
    return linalg::nnls(gt, -grad).residual;
}

// Newton on the KKT equations of the constraints active at the barrier solution.
inline Eigen::Matrix<double, 6, 1> kkt_polish(const BarrierProblem& prob, Eigen::Matrix<double, 6, 1> x, double mu,
                                              double active_tol) {
    std::vector<std::size_t> act;
    for (std::size_t c = 0; c < prob.g.size(); ++c)
        if (prob.h[c] - prob.g[c].dot(x) < active_tol) act.push_back(c);
    if (act.empty()) return x;
    const auto na = static_cast<Eigen::Index>(act.size());
    Eigen::VectorXd lambda(na);
    for (Eigen::Index j = 0; j < na; ++j) lambda[j] = mu / (prob.h[act[static_cast<std::size_t>(j)]] - prob.g[act[static_cast<std::size_t>(j)]].dot(x));

    double best_norm = std::numeric_limits<double>::infinity();
    Eigen::Matrix<double, 6, 1> best = x;
    for (int it = 0; it < 30; ++it) {
        Eigen::Matrix<double, 6, 1> grad;
        Eigen::Matrix<double, 6, 6> hess;
        prob.derivatives(x, 0.0, grad, hess);  // mu = 0: pure -log det terms
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6 + na, 6 + na);
        Eigen::VectorXd f(6 + na);
        f.head<6>() = grad;
        j.topLeftCorner<6, 6>() = hess;
        for (Eigen::Index c = 0; c < na; ++c) {
            const auto& g = prob.g[act[static_cast<std::size_t>(c)]];
            f.head<6>() += lambda[c] * g;
            j.block(0, 6 + c, 6, 1) = g;
            j.block(6 + c, 0, 1, 6) = g.transpose();
            f[6 + c] = g.dot(x) - prob.h[act[static_cast<std::size_t>(c)]];
        }
        bool feasible = true;
        for (std::size_t c = 0; c < prob.g.size(); ++c) feasible &= prob.h[c] - prob.g[c].dot(x) > -1e-13;
        const double fn = f.norm();
        if (feasible && fn < best_norm) { best_norm = fn; best = x; }
        if (fn < 1e-15) break;
        const Eigen::VectorXd step = j.completeOrthogonalDecomposition().solve(-f);
        if (!step.allFinite()) break;
        x += step.head<6>();
        lambda += step.tail(na);
    }
    return best;
}

}  // namespace detail

/// Affine image of K of maximal area inside L.
///
/// Log-barrier Newton iterations over the six map parameters from several
/// rotated and reflected starts, each a copy of K shrunk about its centroid
/// into L. Both orientation branches are searched; the best |det| wins and
/// near ties keep the earliest start (the identity comes first).
inline MaxVolumeResult max_volume_position(const ConvexPolygon& k, const ConvexPolygon& l,
                                           const MaxVolumeOptions& o = {}, const Tolerances& tol = {}) {
    const detail::BarrierProblem prob(k, l);
    const Point ck = centroid(k), cl = centroid(l);
    const ConvexPolygon l0 = translate(l, -cl);

    MaxVolumeResult best;
    best.det = -1.0;
    double best_grad = std::numeric_limits<double>::infinity();
    int index = 0;
    for (const bool reflect : {false, true}) {
        for (int r = 0; r < o.rotations; ++r, ++index) {
            AffineMap lin = AffineMap::rotation(2.0 * std::numbers::pi * r / o.rotations);
            if (reflect) lin = lin.compose(AffineMap::linear(1.0, 0.0, 0.0, -1.0));
            const ConvexPolygon moved = apply_affine(lin, translate(k, -ck), tol);
            const double fit = min_enclosing_scale(l0, moved, tol).r;
            const double shrink = 1.0 / (fit * (1.0 + 1e-3));
            // x -> shrink * lin (x - ck) + cl
            const Point t = cl - shrink * lin.apply_linear(ck);
            Eigen::Matrix<double, 6, 1> x0;
            x0 << shrink * lin.m11, shrink * lin.m12, shrink * lin.m21, shrink * lin.m22, t.x, t.y;
            auto run = detail::barrier_descent(prob, x0, o);
            // Weakly active constraints converge slowly; widen the active set if needed.
            const Eigen::Matrix<double, 6, 1> raw = run.x;
            run.grad_norm = std::numeric_limits<double>::infinity();
            for (double widen = 1.0; widen <= 1e3 && !(run.grad_norm < o.gradient_tol); widen *= 10.0) {
                const auto y = detail::kkt_polish(prob, raw, o.mu_final, o.active_tol * widen);
                const double res = detail::kkt_residual(prob, y, o.active_tol);
                if (res < run.grad_norm) run.x = y, run.grad_norm = res;
            }
            const double det = std::abs(run.x[0] * run.x[3] - run.x[1] * run.x[2]);
            if (det > best.det * (1.0 + 1e-9)) {
                best.map = {run.x[0], run.x[1], run.x[2], run.x[3], run.x[4], run.x[5]};
                best.det = det;
                best.start_index = index;
                best.newton_steps = run.steps;
                best_grad = run.grad_norm;
            }
        }
    }
    if (best.det <= 0.0) throw Error(ErrorCode::Infeasible, "no affine image of K fits in L");
    best.stationarity = best_grad;
    if (!(best_grad < o.gradient_tol))
        throw Error(ErrorCode::NonConverged, "barrier stationarity " + std::to_string(best_grad));
    return best;
}

}  // namespace bmforge
