#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "bmforge/io.hpp"
#include "bmforge/scenario.hpp"

namespace bmforge::scenario {

/// Largest eps in (0, hi] found by bisection such that the scenario passes,
/// assuming passing is monotone near 0. Errors count as failures.
inline double epsilon_threshold(const std::function<Report(double)>& run, double hi, int iters = 30) {
    auto pass = [&](double eps) {
        try {
            return run(eps).passed();
        } catch (const Error&) {
            return false;
        }
    };
    if (pass(hi)) return hi;
    double lo = 0.0;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pass(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Reports eps0 and checks a grid of eps in (0, eps0].
inline void attach_threshold(Report& rep, const std::function<Report(double)>& run, double hi, int grid = 8) {
    const double eps0 = epsilon_threshold(run, hi);
    rep.values["epsilon0"] = eps0;
    int failures = eps0 > 0.0 ? 0 : 1;
    for (int i = 1; i <= grid && eps0 > 0.0; ++i) {
        try {
            if (!run(eps0 * i / grid).passed()) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    rep.check("all assertions pass on (0, epsilon0]", static_cast<double>(failures));
}

inline const std::set<std::string>& scenario_ids() {
    static const std::set<std::string> ids{"case1a", "case1b_stretch", "case1b_shift", "case1c",
                                           "case2a", "case2b",         "case3",        "remark_pentagon"};
    return ids;
}

/// Executes {"id": ..., "parameters": {...}, "bodies": {name: polygon | null}}.
inline Report run_scenario(const io::json& j, std::uint64_t seed = 0, const Tolerances& tol = {}) {
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string())
        throw Error(ErrorCode::ParseError, "scenario needs a string \"id\"");
    const std::string id = j.at("id").get<std::string>();
    if (!scenario_ids().count(id)) throw Error(ErrorCode::UnknownScenario, "unknown scenario id \"" + id + "\"");

    std::map<std::string, double> params;
    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object()) throw Error(ErrorCode::ParseError, "\"parameters\" must be an object");
        for (const auto& [k, v] : j.at("parameters").items()) {
            if (!v.is_number()) throw Error(ErrorCode::ParameterOutOfRange, "parameter " + k + " must be a number");
            params[k] = v.get<double>();
        }
    }
    std::optional<ConvexPolygon> k_in, l_in;
    if (j.contains("bodies")) {
        for (const auto& [name, v] : j.at("bodies").items()) {
            if (name != "K" && name != "L") throw Error(ErrorCode::ParameterOutOfRange, "unknown body " + name);
            if (v.is_null()) continue;
            (name == "K" ? k_in : l_in) = io::polygon_from_json(v, tol);
        }
    }
    auto allow = [&](std::initializer_list<const char*> names) {
        for (const auto& [k, v] : params) {
            bool ok = false;
            for (const char* n : names) ok |= k == n;
            if (!ok) throw Error(ErrorCode::ParameterOutOfRange, "scenario " + id + " takes no parameter " + k);
        }
    };
    auto get = [&](const char* name, double def, double lo, double hi) {
        const double v = params.count(name) ? params.at(name) : def;
        if (!(v >= lo && v <= hi))
            throw Error(ErrorCode::ParameterOutOfRange, std::string(name) + " = " + std::to_string(v) + " is out of range");
        return v;
    };

    Report rep;
    if (id == "case1a") {
        allow({});
        rep = case1a(k_in, l_in, tol);
    } else if (id == "case1b_stretch") {
        allow({"epsilon", "epsilon_max"});
        const double eps = get("epsilon", 0.02, 0.0, 1.0), hi = get("epsilon_max", 0.5, 1e-12, 1.0);
        const ConvexPolygon k = k_in.value_or(fixtures::case1b_k()), l = l_in.value_or(fixtures::case1b_l());
        build_case1_frame(k, l, tol);
        auto run = [&](double e) { return case1b_stretch(k, l, e, std::nullopt, tol); };
        rep = run(eps);
        attach_threshold(rep, run, hi);
    } else if (id == "case1b_shift") {
        allow({"epsilon", "r", "samples"});
        const double r = get("r", 0.8, 0.0, 1.0), eps = get("epsilon", 0.05, 0.0, 1.0);
        const int samples = static_cast<int>(get("samples", 10000, 1, 1e6));
        auto run = [&](double e) { return case1b_shift_stretch(e, r, samples, tol); };
        rep = run(eps);
        attach_threshold(rep, run, (1.0 - r) / 2.0);
    } else if (id == "case1c") {
        allow({"epsilon", "epsilon_max"});
        const double eps = get("epsilon", 0.02, 0.0, 1.0), hi = get("epsilon_max", 1.0, 1e-12, 3.0);
        const ConvexPolygon k = k_in.value_or(fixtures::case1c_k()), l = l_in.value_or(fixtures::case1c_l());
        build_case1_frame(k, l, tol);
        auto run = [&](double e) { return case1c_trapezoid_map(k, l, e, tol); };
        rep = run(eps);
        attach_threshold(rep, run, hi);
    } else if (id == "case2a") {
        allow({});
        rep = case2a(k_in, l_in, seed, tol);
    } else if (id == "case2b") {
        allow({"epsilon", "epsilon_max"});
        const double eps = get("epsilon", 0.01, 0.0, 0.499), hi = get("epsilon_max", 0.45, 1e-12, 0.499);
        Case2bConfig cfg;
        if (k_in) cfg.k = *k_in;
        if (l_in) cfg.l = *l_in;
        auto run = [&](double e) { return case2b_trapezoid_perturb(cfg, e, tol); };
        rep = run(eps);
        attach_threshold(rep, run, hi);
    } else if (id == "case3") {
        allow({});
        rep = case3(k_in, l_in, tol);
    } else {
        allow({});
        rep = remark_pentagon(seed, tol);
    }
    rep.id = id;
    for (const auto& [k, v] : params) rep.parameters[k] = v;
    return rep;
}

}  // namespace bmforge::scenario
