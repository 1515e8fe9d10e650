#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "bmforge/polygon.hpp"
#include "bmforge/scenario.hpp"

namespace bmforge::svg {

enum class Stroke { Solid, Dotted };

struct Layer {
    std::string label;
    ConvexPolygon polygon;
    Stroke stroke = Stroke::Solid;
    std::string color = "#000000";
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

/// Plain SVG with y pointing up; one closed path per layer plus a legend.
inline std::string render(const std::vector<Layer>& layers, double size = 480.0) {
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const auto& l : layers)
        for (const auto& p : l.polygon.vertices()) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    if (layers.empty()) xmin = ymin = -1.0, xmax = ymax = 1.0;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double pad = 0.08 * size, scale = (size - 2.0 * pad) / span;
    auto sx = [&](double x) { return pad + (x - xmin) * scale; };
    auto sy = [&](double y) { return size - pad - (y - ymin) * scale; };

    const double legend = 18.0 * static_cast<double>(layers.size()) + 8.0;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(size) + "\" height=\"" +
                      detail::fmt(size + legend) + "\" viewBox=\"0 0 " + detail::fmt(size) + " " +
                      detail::fmt(size + legend) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (const auto& l : layers) {
        out += "<path d=\"";
        for (std::size_t i = 0; i < l.polygon.size(); ++i) {
            const Point& p = l.polygon[i];
            out += (i == 0 ? "M" : " L") + detail::fmt(sx(p.x)) + " " + detail::fmt(sy(p.y));
        }
        out += " Z\" fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"1.5\"";
        if (l.stroke == Stroke::Dotted) out += " stroke-dasharray=\"2 4\" stroke-linecap=\"round\"";
        out += "><title>" + l.label + "</title></path>\n";
    }
    double y = size + 14.0;
    for (const auto& l : layers) {
        out += "<line x1=\"10\" y1=\"" + detail::fmt(y - 4.0) + "\" x2=\"40\" y2=\"" + detail::fmt(y - 4.0) +
               "\" stroke=\"" + l.color + "\" stroke-width=\"1.5\"" +
               (l.stroke == Stroke::Dotted ? " stroke-dasharray=\"2 4\"" : "") + "/>\n";
        out += "<text x=\"48\" y=\"" + detail::fmt(y) + "\" font-family=\"sans-serif\" font-size=\"12\">" + l.label +
               "</text>\n";
        y += 18.0;
    }
    out += "</svg>\n";
    return out;
}

/// Scenario figure: the perturbed (or original) L solid, every other body dotted.
inline std::string render(const scenario::Report& rep) {
    std::vector<Layer> layers;
    const bool perturbed = rep.body("L'") != nullptr;
    for (const auto& [name, p] : rep.bodies) {
        const bool solid = perturbed ? name == "L'" : (name == "L" || name == "T(region)");
        const std::string color = name == "L'" || (!perturbed && name == "L") ? "#1f4e9c"
                                  : name == "L"                               ? "#8fa8d6"
                                  : name == "K"                               ? "#b03a2e"
                                                                              : "#333333";
        layers.push_back({name, p, solid ? Stroke::Solid : Stroke::Dotted, color});
    }
    return render(layers);
}

}  // namespace bmforge::svg
