#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace bmforge::linalg {

struct LpResult {
    bool ok = false;
    double value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x;
};

namespace detail {

// Dense tableau simplex for  min d.l  s.t.  M l = e, l >= 0  (Bland's entering rule).
class Tableau {
public:
    Tableau(const Eigen::MatrixXd& m, const Eigen::VectorXd& e) : p_(m.rows()), n_(m.cols()) {
        t_ = Eigen::MatrixXd::Zero(p_ + 1, n_ + p_ + 1);
        for (Eigen::Index i = 0; i < p_; ++i) {
            const double s = e[i] < 0 ? -1.0 : 1.0;
            t_.row(i).head(n_) = s * m.row(i);
            t_(i, n_ + i) = 1.0;
            t_(i, n_ + p_) = s * e[i];
            basis_.push_back(n_ + i);
        }
    }

    bool phase_one() {
        // cost row: sum of artificials, expressed in nonbasic terms
        t_.row(p_).setZero();
        for (Eigen::Index i = 0; i < p_; ++i) t_.row(p_) -= t_.row(i);
        for (Eigen::Index i = 0; i < p_; ++i) t_(p_, n_ + i) = 0.0;
        if (!iterate(n_ + p_)) return false;
        if (-t_(p_, n_ + p_) > 1e-9 * std::max(1.0, t_.col(n_ + p_).head(p_).cwiseAbs().maxCoeff())) return false;
        // pivot remaining artificials out where possible
        for (Eigen::Index i = 0; i < p_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (std::abs(t_(i, j)) > 1e-9) { pivot(i, j); break; }
            }
        }
        return true;
    }

    bool phase_two(const Eigen::VectorXd& d) {
        t_.row(p_).setZero();
        t_.row(p_).head(n_) = d.transpose();
        for (Eigen::Index i = 0; i < p_; ++i) {
            const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
            if (b < n_ && d[b] != 0.0) t_.row(p_) -= d[b] * t_.row(i);
        }
        return iterate(n_);
    }

    const std::vector<Eigen::Index>& basis() const { return basis_; }
    double objective() const { return -t_(p_, n_ + p_); }

private:
    bool iterate(Eigen::Index columns) {
        for (int guard = 0; guard < 5000; ++guard) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < columns; ++j) {
                if (t_(p_, j) < -1e-11) { enter = j; break; }
            }
            if (enter < 0) return true;
            // minimum ratio; near ties go to the largest pivot element
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < p_; ++i) {
                const double a = t_(i, enter);
                if (a <= 1e-9) continue;
                const double ratio = std::max(0.0, t_(i, n_ + p_)) / a;
                if (leave < 0 || ratio < best - 1e-12 || (ratio <= best + 1e-12 && a > t_(leave, enter))) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave < 0) return false;  // unbounded
            pivot(leave, enter);
        }
        return false;
    }

    void pivot(Eigen::Index row, Eigen::Index col) {
        const double piv = t_(row, col);
        t_.row(row) /= piv;
        for (Eigen::Index i = 0; i <= p_; ++i) {
            const double f = t_(i, col);
            if (i != row && f != 0.0) t_.row(i) -= f * t_.row(row);
        }
        basis_[static_cast<std::size_t>(row)] = col;
    }

    Eigen::Index p_, n_;
    Eigen::MatrixXd t_;
    std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// min c.x  subject to  G x <= b  with x free. Solved through the dual
/// (min b.l  s.t.  G^T l = -c, l >= 0); x comes from the active rows of the
/// optimal dual basis.
inline LpResult solve_lp(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    LpResult res;
    detail::Tableau tab(g.transpose(), -c);
    if (!tab.phase_one() || !tab.phase_two(b)) return res;
    std::vector<Eigen::Index> rows;
    for (const auto j : tab.basis())
        if (j < g.rows()) rows.push_back(j);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), g.cols());
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = g.row(rows[i]);
        rhs[static_cast<Eigen::Index>(i)] = b[rows[i]];
    }
    res.x = a.completeOrthogonalDecomposition().solve(rhs);
    res.value = c.dot(res.x);
    res.ok = res.x.allFinite();
    return res;
}

}  // namespace bmforge::linalg
