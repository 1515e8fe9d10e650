#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace bmforge::opt {

using Vec = std::vector<double>;
using Objective = std::function<double(const Vec&)>;

struct MinimizeResult {
    Vec x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    double final_step = 0.0;
};

/// Nelder-Mead simplex search. Stops when the simplex diameter drops below
/// `tol_diameter` or after `max_evals` objective calls.
inline MinimizeResult nelder_mead(const Objective& f, Vec x0, double step, double tol_diameter,
                                  std::size_t max_evals) {
    const std::size_t n = x0.size();
    std::vector<Vec> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    std::size_t evals = 0;
    for (std::size_t i = 0; i <= n; ++i) { fv[i] = f(simplex[i]); ++evals; }

    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += std::pow(simplex[i][k] - simplex[0][k], 2);
            d = std::max(d, std::sqrt(s));
        }
        return d;
    };

    std::vector<std::size_t> order(n + 1);
    while (evals < max_evals) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        {
            std::vector<Vec> s2(n + 1);
            std::vector<double> f2(n + 1);
            for (std::size_t i = 0; i <= n; ++i) { s2[i] = simplex[order[i]]; f2[i] = fv[order[i]]; }
            simplex.swap(s2);
            fv.swap(f2);
        }
        if (diameter() < tol_diameter) break;

        Vec centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        auto along = [&](double t) {
            Vec p(n);
            for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[n][k] - centroid[k]);
            return p;
        };
        const Vec xr = along(-1.0);
        const double fr = f(xr); ++evals;
        if (fr < fv[0]) {
            const Vec xe = along(-2.0);
            const double fe = f(xe); ++evals;
            if (fe < fr) { simplex[n] = xe; fv[n] = fe; } else { simplex[n] = xr; fv[n] = fr; }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr; fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const Vec xc = along(outside ? -0.5 : 0.5);
            const double fc = f(xc); ++evals;
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc; fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    fv[i] = f(simplex[i]); ++evals;
                }
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return {simplex[best], fv[best], evals, diameter()};
}

struct PatternSearchOptions {
    double initial_step = 0.25;
    double shrink = 0.5;
    double min_step = 1e-9;
    std::size_t max_evals = 2000;
};

/// Opportunistic pattern search that polls the +/- columns of a freshly drawn
/// random orthogonal basis at every iteration. A random basis keeps the search
/// from stalling on the ridges of max-type objectives.
///
/// `normalize`, when set, is applied to every accepted point; it must not
/// change the objective value.
inline MinimizeResult pattern_search(const Objective& f, Vec x0, double f0, const PatternSearchOptions& o,
                                     std::mt19937_64& rng,
                                     const std::function<void(Vec&)>& normalize = {}) {
    const std::size_t n = x0.size();
    MinimizeResult res{std::move(x0), f0, 0, o.initial_step};
    std::normal_distribution<double> gauss(0.0, 1.0);
    double step = o.initial_step;
    Vec w(n), trial(n);
    while (step >= o.min_step && res.evaluations < o.max_evals) {
        // Householder reflection I - 2 w w^T of a random unit vector.
        double len = 0.0;
        for (auto& wi : w) { wi = gauss(rng); len += wi * wi; }
        len = std::sqrt(len);
        for (auto& wi : w) wi /= len;

        bool improved = false;
        for (std::size_t col = 0; col < n && !improved; ++col) {
            for (const double sign : {1.0, -1.0}) {
                for (std::size_t k = 0; k < n; ++k) {
                    const double h = (k == col ? 1.0 : 0.0) - 2.0 * w[k] * w[col];
                    trial[k] = res.x[k] + sign * step * h;
                }
                const double ft = f(trial);
                ++res.evaluations;
                if (ft < res.value) {
                    res.x = trial;
                    res.value = ft;
                    if (normalize) normalize(res.x);
                    improved = true;
                    break;
                }
                if (res.evaluations >= o.max_evals) break;
            }
            if (res.evaluations >= o.max_evals) break;
        }
        if (improved) {
            step = std::min(step * 2.0, o.initial_step);
        } else {
            step *= o.shrink;
        }
    }
    res.final_step = step;
    return res;
}

}  // namespace bmforge::opt
