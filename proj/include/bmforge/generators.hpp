#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "bmforge/polygon.hpp"

namespace bmforge::gen {

inline ConvexPolygon regular_polygon(int n, double radius = 1.0, double phase = 0.0) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
        const double a = phase + 2.0 * std::numbers::pi * i / n;
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return ConvexPolygon(std::move(pts));
}

inline ConvexPolygon unit_square() { return ConvexPolygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

/// Equilateral triangle with circumradius 1 and centroid at the origin.
inline ConvexPolygon triangle() { return regular_polygon(3, 1.0, std::numbers::pi / 2.0); }

/// Random convex polygon with exactly `n` vertices and the origin well inside.
/// Points on the unit circle with bounded angular gaps, then a random linear stretch.
template <class Rng>
ConvexPolygon random_convex(Rng& rng, int n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double two_pi = 2.0 * std::numbers::pi;
    for (;;) {
        std::vector<double> angles(static_cast<std::size_t>(n));
        for (auto& a : angles) a = two_pi * unit(rng);
        std::sort(angles.begin(), angles.end());
        double min_gap = two_pi - angles.back() + angles.front(), max_gap = min_gap;
        for (std::size_t i = 1; i < angles.size(); ++i) {
            min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
            max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
        }
        if (min_gap < 0.25 / n || max_gap > 0.85 * std::numbers::pi) continue;
        const double theta = two_pi * unit(rng);
        const double stretch = std::exp(0.6 * (unit(rng) - 0.5));
        const double c = std::cos(theta), s = std::sin(theta);
        std::vector<Point> pts;
        for (const double a : angles) {
            const Point q{stretch * std::cos(a), std::sin(a) / stretch};
            pts.push_back({c * q.x - s * q.y, s * q.x + c * q.y});
        }
        try {
            ConvexPolygon p(std::move(pts), 1e-6);
            if (static_cast<int>(p.size()) == n && area(p) > 0.2) return p;
        } catch (const Error&) {
        }
    }
}

/// Random centrally symmetric polygon with 2k vertices centered at the origin.
template <class Rng>
ConvexPolygon random_symmetric(Rng& rng, int k) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pi = std::numbers::pi;
    for (;;) {
        std::vector<double> angles(static_cast<std::size_t>(k));
        for (auto& a : angles) a = pi * unit(rng);
        std::sort(angles.begin(), angles.end());
        double min_gap = pi - angles.back() + angles.front();
        for (std::size_t i = 1; i < angles.size(); ++i) min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
        if (min_gap < 0.25 / k) continue;
        const double theta = 2.0 * pi * unit(rng);
        const double stretch = std::exp(0.6 * (unit(rng) - 0.5));
        const double c = std::cos(theta), s = std::sin(theta);
        std::vector<Point> pts;
        for (const double a : angles) {
            const Point q{stretch * std::cos(a), std::sin(a) / stretch};
            const Point p{c * q.x - s * q.y, s * q.x + c * q.y};
            pts.push_back(p);
            pts.push_back(-p);
        }
        try {
            ConvexPolygon p(std::move(pts), 1e-6);
            if (static_cast<int>(p.size()) == 2 * k && area(p) > 0.2) return p;
        } catch (const Error&) {
        }
    }
}

/// Random invertible affine map with bounded condition number.
template <class Rng>
AffineMap random_affine(Rng& rng, bool allow_reflection = true) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const double stretch = std::exp(0.8 * (unit(rng) - 0.5));
    const double shear = unit(rng) - 0.5;
    const double size = 0.5 + unit(rng);
    AffineMap m = AffineMap::rotation(theta).compose(AffineMap::linear(size * stretch, size * shear, 0.0, size / stretch));
    if (allow_reflection && unit(rng) < 0.5) m = m.compose(AffineMap::linear(1.0, 0.0, 0.0, -1.0));
    m.t1 = unit(rng) - 0.5;
    m.t2 = unit(rng) - 0.5;
    return m;
}

enum class PolygonClass { Triangle, Quadrilateral, Pentagon, Parallelogram, SymmetricHexagon, Symmetric };

inline std::string_view to_string(PolygonClass c) {
    switch (c) {
        case PolygonClass::Triangle: return "triangle";
        case PolygonClass::Quadrilateral: return "quadrilateral";
        case PolygonClass::Pentagon: return "pentagon";
        case PolygonClass::Parallelogram: return "parallelogram";
        case PolygonClass::SymmetricHexagon: return "symmetric_hexagon";
        case PolygonClass::Symmetric: return "symmetric";
    }
    return "unknown";
}

template <class Rng>
ConvexPolygon sample(Rng& rng, PolygonClass c) {
    std::uniform_int_distribution<int> half(2, 4);
    switch (c) {
        case PolygonClass::Triangle: return random_convex(rng, 3);
        case PolygonClass::Quadrilateral: return random_convex(rng, 4);
        case PolygonClass::Pentagon: return random_convex(rng, 5);
        case PolygonClass::Parallelogram: return random_symmetric(rng, 2);
        case PolygonClass::SymmetricHexagon: return random_symmetric(rng, 3);
        case PolygonClass::Symmetric: return random_symmetric(rng, half(rng));
    }
    return random_convex(rng, 3);
}

}  // namespace bmforge::gen
