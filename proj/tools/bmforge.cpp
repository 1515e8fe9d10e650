#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bmforge/distance.hpp"
#include "bmforge/io.hpp"
#include "bmforge/john.hpp"
#include "bmforge/maxvol.hpp"
#include "bmforge/replay.hpp"
#include "bmforge/svg.hpp"

using namespace bmforge;
using io::json;

namespace {

enum Exit { Ok = 0, IoFailure = 1, NotConverged = 2, NoCert = 3, OtherError = 4 };

struct RunConfig {
    double tol = Tolerances{}.geom;
    double cert_tol = Tolerances{}.cert;
    std::uint64_t seed = 0;
    int restarts = DistanceOptions{}.restarts;
    int max_iters = DistanceOptions{}.refine_iters;
    std::string format = "json";
    std::string render;
    std::string output;
    bool grunbaum = false;
    bool no_maxvol = false;
    bool no_timing = false;

    Tolerances tolerances() const {
        Tolerances t;
        t.geom = tol;
        t.cert = cert_tol;
        return t;
    }
    DistanceOptions distance() const {
        DistanceOptions o;
        o.seed = seed;
        o.restarts = restarts;
        o.refine_iters = max_iters;
        o.tol = tolerances();
        return o;
    }
};

int exit_code(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ParseError: return IoFailure;
        case ErrorCode::NonConverged: return NotConverged;
        case ErrorCode::NoCertificate:
        case ErrorCode::InfeasibleWeights:
        case ErrorCode::CertificateInvalid: return NoCert;
        default: return OtherError;
    }
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        io::write_text(cfg.output, text);
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    return out + "\n";
}

std::vector<svg::Layer> distance_layers(const ConvexPolygon& k, const ConvexPolygon& l, const DistanceReport& r) {
    const ConvexPolygon ku = translate(k, r.shift_inner);
    const ConvexPolygon tl = apply_affine(r.map, translate(l, r.shift_outer));
    const ConvexPolygon outer = scaled(ku, r.sign * r.r);
    return {{"K + u", ku, svg::Stroke::Dotted, "#b03a2e"},
            {"T(L + v)", tl, svg::Stroke::Solid, "#1f4e9c"},
            {r.sign > 0 ? "r (K + u)" : "-r (K + u)", outer, svg::Stroke::Dotted, "#333333"}};
}

struct PairResult {
    json j;
    std::string csv;
    int code = Ok;
};

PairResult run_distance(const RunConfig& cfg, const std::string& kf, const std::string& lf, bool grunbaum) {
    PairResult res;
    const std::string mode = grunbaum ? "grunbaum" : "bm";
    const auto start = std::chrono::steady_clock::now();
    try {
        const ConvexPolygon k = io::read_polygon(kf, cfg.tolerances());
        const ConvexPolygon l = io::read_polygon(lf, cfg.tolerances());
        const DistanceOptions opt = cfg.distance();
        const DistanceReport rep = grunbaum ? grunbaum_distance(k, l, opt) : banach_mazur_distance(k, l, opt);
        const double secs =
            cfg.no_timing ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.j = {{"k_file", kf}, {"l_file", lf}, {"mode", mode}, {"K", io::to_json(k)}, {"L", io::to_json(l)},
                 {"report", io::to_json(rep)}};
        res.csv = csv_row({kf, lf, mode, fmt(rep.r), std::to_string(rep.sign), rep.verified ? "true" : "false",
                           std::to_string(rep.restarts_used), fmt(secs)});
        res.code = rep.verified ? Ok : NotConverged;
        if (!cfg.render.empty()) io::write_text(cfg.render, svg::render(distance_layers(k, l, rep)));
    } catch (const Error& e) {
        res.code = exit_code(e);
        res.j = {{"k_file", kf}, {"l_file", lf}, {"mode", mode}, {"error", e.what()}};
        res.csv = csv_row({kf, lf, mode, "nan", "0", "false", "0", "0"});
        std::cerr << e.what() << "\n";
    }
    return res;
}

const char* kCsvHeader = "k_file,l_file,mode,r,sign,verified,restarts_used,seconds\n";

int cmd_distance(const RunConfig& cfg, const std::vector<std::string>& files, const std::string& batch) {
    std::vector<std::tuple<std::string, std::string, bool>> jobs;
    if (!batch.empty()) {
        std::ifstream in(batch);
        if (!in) {
            std::cerr << "ParseError: cannot open " << batch << "\n";
            return IoFailure;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ss(line);
            std::string k, l, mode;
            std::getline(ss, k, ',');
            std::getline(ss, l, ',');
            std::getline(ss, mode, ',');
            if (k == "k_file") continue;
            if (k.empty() || l.empty()) {
                std::cerr << "ParseError: batch line needs k_file,l_file[,mode]\n";
                return IoFailure;
            }
            jobs.emplace_back(k, l, mode.empty() ? cfg.grunbaum : mode == "grunbaum");
        }
    } else {
        if (files.size() != 2) {
            std::cerr << "distance needs two polygon files or --batch\n";
            return IoFailure;
        }
        jobs.emplace_back(files[0], files[1], cfg.grunbaum);
    }
    int code = Ok;
    json all = json::array();
    std::string csv = kCsvHeader;
    for (const auto& [k, l, g] : jobs) {
        auto r = run_distance(cfg, k, l, g);
        code = std::max(code, r.code);
        all.push_back(r.j);
        csv += r.csv;
    }
    if (cfg.format == "csv") {
        emit(cfg, csv);
    } else {
        emit(cfg, (batch.empty() ? all[0] : all).dump(2) + "\n");
    }
    return code;
}

int cmd_john(const RunConfig& cfg, const std::vector<std::string>& files) {
    if (files.size() != 2) {
        std::cerr << "john needs two polygon files\n";
        return IoFailure;
    }
    const Tolerances tol = cfg.tolerances();
    const ConvexPolygon k = io::read_polygon(files[0], tol);
    const ConvexPolygon l = io::read_polygon(files[1], tol);
    AffineMap map = AffineMap::identity();
    json out = json::object();
    if (!cfg.no_maxvol) {
        MaxVolumeOptions mo;
        mo.newton_iters = cfg.max_iters > 0 ? std::max(cfg.max_iters, MaxVolumeOptions{}.newton_iters) : mo.newton_iters;
        const auto mv = max_volume_position(k, l, mo, tol);
        map = mv.map;
        out["det"] = mv.det;
        out["stationarity"] = mv.stationarity;
    }
    const ConvexPolygon image = apply_affine(map, k, tol);
    const auto rc = recenter_search(image, l, tol);
    const auto report = check_john_certificate(rc.cert, tol);
    out["map"] = io::to_json(map);
    out["K_image"] = io::to_json(image);
    out["certificate"] = io::to_json(rc.cert);
    out["m"] = rc.cert.size();
    out["residuals"] = io::to_json(report);
    if (report.passed) {
        const auto g = check_glmp(image, l, rc.cert, tol);
        out["glmp"] = {{"holds", g.holds}, {"slack", g.slack}, {"s", g.s ? json(*g.s) : json("segment")}};
        if (rc.cert.size() == 3) {
            const auto tp = triple_pair_check(rc.cert, tol);
            out["triple_pair"] = {{"passed", tp.passed}, {"weight_deviation", tp.weight_deviation},
                             {"cross_deviation", tp.cross_deviation}};
        }
    }
    if (cfg.format == "csv") {
        std::string csv = "i,u_x,u_y,v_x,v_y,weight\n";
        for (std::size_t i = 0; i < rc.cert.size(); ++i) {
            const auto& p = rc.cert.pairs[i];
            csv += csv_row({std::to_string(i), fmt(p.u.x), fmt(p.u.y), fmt(p.v.dx), fmt(p.v.dy), fmt(rc.cert.weights[i])});
        }
        emit(cfg, csv);
    } else {
        emit(cfg, out.dump(2) + "\n");
    }
    std::cerr << "m = " << rc.cert.size() << "  identity " << report.identity << "  sum_u " << report.sum_u << "  sum_v "
              << report.sum_v << "  pairing " << report.pairing << "  weights " << report.weight_sum << "\n";
    return report.passed ? Ok : NoCert;
}

int cmd_replay(const RunConfig& cfg, const std::string& file) {
    const auto rep = scenario::run_scenario(io::read_json(file), cfg.seed, cfg.tolerances());
    if (cfg.format == "csv") {
        std::string csv = "name,residual,passed\n";
        for (const auto& a : rep.assertions) csv += csv_row({"\"" + a.name + "\"", fmt(a.residual), a.passed ? "true" : "false"});
        emit(cfg, csv);
    } else {
        emit(cfg, io::to_json(rep).dump(2) + "\n");
    }
    if (!cfg.render.empty()) io::write_text(cfg.render, svg::render(rep));
    if (!rep.passed()) {
        for (const auto& a : rep.assertions)
            if (!a.passed) std::cerr << "failed: " << a.name << " (residual " << a.residual << ")\n";
        return OtherError;
    }
    return Ok;
}

gen::PolygonClass class_from_string(const std::string& s) {
    for (auto c : {gen::PolygonClass::Triangle, gen::PolygonClass::Quadrilateral, gen::PolygonClass::Pentagon,
                   gen::PolygonClass::Parallelogram, gen::PolygonClass::SymmetricHexagon, gen::PolygonClass::Symmetric})
        if (gen::to_string(c) == s) return c;
    throw Error(ErrorCode::ParseError, "unknown polygon class \"" + s + "\"");
}

int cmd_search(const RunConfig& cfg, const std::string& file, int budget) {
    SearchConfig sc;
    sc.seed = cfg.seed;
    sc.distance = cfg.distance();
    sc.grunbaum = cfg.grunbaum;
    if (!file.empty()) {
        const json j = io::read_json(file);
        if (j.contains("classes")) {
            sc.classes.clear();
            for (const auto& pair : j.at("classes")) {
                if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::ParseError, "classes are [k, l] pairs");
                sc.classes.emplace_back(class_from_string(pair[0].get<std::string>()),
                                        class_from_string(pair[1].get<std::string>()));
            }
        }
        sc.budget = j.value("budget", sc.budget);
        sc.epsilon = j.value("epsilon", sc.epsilon);
        sc.grunbaum = j.value("grunbaum", sc.grunbaum);
    }
    if (budget >= 0) sc.budget = budget;
    const auto found = extremal_pair_search(sc);
    double best = 0.0;
    int flagged = 0;
    json list = json::array();
    std::string csv = "sample,k_class,l_class,estimate,verified,flagged\n";
    for (const auto& c : found) {
        best = std::max(best, c.estimate);
        flagged += c.flagged;
        list.push_back({{"sample", c.sample}, {"k_class", c.k_class}, {"l_class", c.l_class}, {"estimate", c.estimate},
                        {"verified", c.verified}, {"flagged", c.flagged}, {"K", io::to_json(c.k)}, {"L", io::to_json(c.l)}});
        csv += csv_row({std::to_string(c.sample), c.k_class, c.l_class, fmt(c.estimate), c.verified ? "true" : "false",
                        c.flagged ? "true" : "false"});
    }
    if (cfg.format == "csv") {
        emit(cfg, csv);
    } else {
        emit(cfg, json{{"budget", sc.budget}, {"seed", sc.seed}, {"max_estimate", best}, {"flagged", flagged},
                       {"candidates", list}}
                          .dump(2) +
                      "\n");
    }
    return Ok;
}

int cmd_render(const RunConfig& cfg, const std::string& file) {
    const json j = io::read_json(file);
    std::string text;
    if (j.contains("assertions") && j.contains("bodies")) {
        scenario::Report rep;
        rep.id = j.value("id", "");
        for (const auto& [name, p] : j.at("bodies").items()) rep.add_body(name, io::polygon_from_json(p));
        text = svg::render(rep);
    } else if (j.contains("report") && j.contains("K") && j.contains("L")) {
        const ConvexPolygon k = io::polygon_from_json(j.at("K")), l = io::polygon_from_json(j.at("L"));
        text = svg::render(distance_layers(k, l, io::distance_report_from_json(j)));
    } else if (j.contains("vertices")) {
        text = svg::render({{"P", io::polygon_from_json(j), svg::Stroke::Solid, "#1f4e9c"}});
    } else {
        throw Error(ErrorCode::ParseError, "nothing to render in " + file);
    }
    if (!cfg.render.empty()) {
        io::write_text(cfg.render, text);
    } else {
        emit(cfg, text);
    }
    return Ok;
}

void shared_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--tol", cfg.tol, "geometric tolerance");
    sub->add_option("--cert-tol", cfg.cert_tol, "certificate tolerance");
    sub->add_option("--seed", cfg.seed, "random seed (BMFORGE_SEED overrides)");
    sub->add_option("--restarts", cfg.restarts, "random restarts per branch");
    sub->add_option("--max-iters", cfg.max_iters, "refinement iterations");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--render", cfg.render, "write an SVG figure to this file");
    sub->add_option("-o,--output", cfg.output, "write the main output to this file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Banach-Mazur and Grunbaum distances of convex polygons"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::vector<std::string> files;
    std::string batch, file;
    int budget = -1;

    auto* dist = app.add_subcommand("distance", "distance between two polygons");
    shared_flags(dist, cfg);
    dist->add_option("files", files, "K and L polygon files");
    dist->add_option("--batch", batch, "CSV list of k_file,l_file[,mode]");
    dist->add_flag("--grunbaum", cfg.grunbaum, "allow negative homothety");
    dist->add_flag("--no-timing", cfg.no_timing, "write 0 in the seconds column");

    auto* john = app.add_subcommand("john", "John position certificate of K inside L");
    shared_flags(john, cfg);
    john->add_option("files", files, "K and L polygon files")->expected(2);
    john->add_flag("--no-maxvol", cfg.no_maxvol, "use K as given instead of its maximal-volume image");

    auto* replay = app.add_subcommand("replay", "replay a scenario file");
    shared_flags(replay, cfg);
    replay->add_option("file", file, "scenario JSON")->required();

    auto* search = app.add_subcommand("search", "sample pairs and rank them by distance");
    shared_flags(search, cfg);
    search->add_option("config", file, "search configuration JSON");
    search->add_option("--budget", budget, "number of sampled pairs");
    search->add_flag("--grunbaum", cfg.grunbaum, "estimate the Grunbaum distance");

    auto* render = app.add_subcommand("render", "render a report or polygon as SVG");
    shared_flags(render, cfg);
    render->add_option("file", file, "report JSON")->required();

    CLI11_PARSE(app, argc, argv);
    if (const char* env = std::getenv("BMFORGE_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "ParseError: BMFORGE_SEED is not an integer\n";
            return IoFailure;
        }
    }

    try {
        if (dist->parsed()) return cmd_distance(cfg, files, batch);
        if (john->parsed()) return cmd_john(cfg, files);
        if (replay->parsed()) return cmd_replay(cfg, file);
        if (search->parsed()) return cmd_search(cfg, file, budget);
        if (render->parsed()) return cmd_render(cfg, file);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code(e);
    }
    return OtherError;
}
