#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bmforge::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NnlsResult {
    Vector x;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

/// Lawson-Hanson active set: min |A x - b| subject to x >= 0.
inline NnlsResult nnls(const Matrix& a, const Vector& b, int max_iter = 0) {
    const Eigen::Index n = a.cols();
    if (max_iter <= 0) max_iter = static_cast<int>(6 * n + 10);
    Vector x = Vector::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff());

    auto solve_passive = [&](Vector& s) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
        const Vector sol = sub.completeOrthogonalDecomposition().solve(b);
        s = Vector::Zero(n);
        for (std::size_t k = 0; k < idx.size(); ++k) s[idx[k]] = sol[static_cast<Eigen::Index>(k)];
    };

    int it = 0;
    Vector w = a.transpose() * (b - a * x);
    while (it < max_iter) {
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) { best_w = w[j]; best = j; }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        Vector s;
        for (;;) {
            ++it;
            solve_passive(s);
            bool all_positive = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) all_positive = false;
            if (all_positive || it >= max_iter) break;
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - s[j]));
            x += alpha * (s - x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15) { passive[static_cast<std::size_t>(j)] = false; x[j] = 0.0; }
        }
        x = s;
        for (Eigen::Index j = 0; j < n; ++j) if (!passive[static_cast<std::size_t>(j)]) x[j] = 0.0;
        w = a.transpose() * (b - a * x);
    }
    return {x, (a * x - b).norm(), it};
}

/// min |A x - b| subject to x >= lower. Tries the minimum-norm solution first so
/// symmetric inputs keep symmetric answers, then falls back to the active set.
inline NnlsResult bounded_least_squares(const Matrix& a, const Vector& b, double lower) {
    const Vector shifted = b - a * Vector::Constant(a.cols(), lower);
    const Vector mn = a.completeOrthogonalDecomposition().solve(shifted);
    const double mn_res = (a * mn - shifted).norm();
    NnlsResult out;
    if (mn.size() == 0 || mn.minCoeff() >= 0.0) {
        out = {mn, mn_res, 0};
    }
    NnlsResult act = nnls(a, shifted);
    if (act.residual < out.residual - 1e-12) out = act;
    out.x.array() += lower;
    return out;
}

/// Moves a nonnegative solution of A x = b to one with at most rank(A) nonzeros
/// by walking along null-space directions of the active columns.
inline Vector caratheodory_reduce(const Matrix& a, Vector x, double drop = 0.0) {
    for (;;) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            if (x[j] <= drop) x[j] = 0.0;
            else idx.push_back(j);
        }
        Matrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
        Eigen::FullPivLU<Matrix> lu(sub);
        lu.setThreshold(1e-10);
        if (lu.rank() >= sub.cols()) return x;
        Vector y = lu.kernel().col(0);
        if (y.maxCoeff() <= 0.0) y = -y;
        double t = std::numeric_limits<double>::infinity();
        Eigen::Index hit = 0;
        for (Eigen::Index k = 0; k < y.size(); ++k) {
            if (y[k] > 1e-14) {
                const double r = x[idx[static_cast<std::size_t>(k)]] / y[k];
                if (r < t) { t = r; hit = k; }
            }
        }
        for (Eigen::Index k = 0; k < y.size(); ++k) x[idx[static_cast<std::size_t>(k)]] -= t * y[k];
        x[idx[static_cast<std::size_t>(hit)]] = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = std::max(x[j], 0.0);
    }
}

}  // namespace bmforge::linalg
