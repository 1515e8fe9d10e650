#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bmforge/distance.hpp"
#include "bmforge/generators.hpp"
#include "bmforge/io.hpp"
#include "bmforge/john.hpp"
#include "bmforge/maxvol.hpp"
#include "bmforge/replay.hpp"
#include "bmforge/sandwich.hpp"
#include "bmforge/scenario.hpp"

#ifndef BMFORGE_DATA_DIR
#define BMFORGE_DATA_DIR "data"
#endif

using namespace bmforge;
namespace sc = bmforge::scenario;
namespace fs = std::filesystem;
using io::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::mt19937_64 seeded(std::uint64_t suite, std::uint64_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(i), 0xacceu};
    return std::mt19937_64(seq);
}

ConvexPolygon hexagon_around(const ConvexPolygon& tri) {
    std::vector<Point> pts;
    for (const auto& u : tri.vertices()) {
        pts.push_back(u);
        pts.push_back(-u);
    }
    return ConvexPolygon(pts);
}

struct JohnRun {
    std::string name;
    ConvexPolygon image;
    ConvexPolygon l;
    JohnCertificate cert;
};

std::vector<JohnRun> john_fixtures() {
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(fs::path(BMFORGE_DATA_DIR) / "john")) paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<JohnRun> out;
    for (const auto& p : paths) {
        const json j = io::read_json(p.string());
        const ConvexPolygon k = io::polygon_from_json(j.at("K")), l = io::polygon_from_json(j.at("L"));
        const auto mv = max_volume_position(k, l);
        const ConvexPolygon image = apply_affine(mv.map, k);
        out.push_back({p.stem().string(), image, l, recenter_search(image, l).cert});
    }
    return out;
}

Outcome criterion1() {
    const auto t0 = Clock::now();
    const auto d = banach_mazur_distance(gen::unit_square(), gen::triangle());
    const auto g = grunbaum_distance(gen::unit_square(), gen::triangle());
    const double secs = seconds_since(t0);
    const bool ok = within(d.r, 1.997, 2.003) && d.verified && within(g.r, 1.997, 2.003) && g.verified && secs <= 30.0;
    return {ok, "d(square, triangle) = " + fmt("%.6f", d.r) + ", dG = " + fmt("%.6f", g.r) + ", verified " +
                    (d.verified && g.verified ? "yes" : "no") + ", " + fmt("%.2f s", secs)};
}

Outcome criterion2() {
    const auto pent = gen::regular_polygon(5);
    const auto d = banach_mazur_distance(pent, gen::triangle());
    const auto g = grunbaum_distance(pent, gen::triangle());
    const bool ok = within(d.r, 2.115, 2.121) && d.verified && within(std::abs(g.r), 1.997, 2.003) && g.sign == -1 &&
                    g.verified;
    return {ok, "d(pentagon, triangle) = " + fmt("%.6f", d.r) + " (1 + sqrt5/2 = " +
                    fmt("%.6f", 1.0 + std::sqrt(5.0) / 2.0) + "), dG = " + fmt("%.6f", g.r) + " with sign " +
                    std::to_string(g.sign)};
}

Outcome criterion3() {
    const auto tri = asymmetry_constant(gen::triangle());
    bool ok = within(tri.r, 1.999, 2.001);
    std::vector<ConvexPolygon> symmetric{gen::unit_square(), gen::regular_polygon(6), gen::regular_polygon(8),
                                         sc::fixtures::case2a_l(),
                                         io::read_polygon(std::string(BMFORGE_DATA_DIR) + "/polygons/parallelogram.json")};
    for (int i = 0; i < 5; ++i) {
        auto rng = seeded(3, static_cast<std::uint64_t>(i));
        symmetric.push_back(gen::random_symmetric(rng, 2 + i % 3));
    }
    double lo = 1e9, hi = -1e9;
    for (const auto& p : symmetric) {
        const double r = asymmetry_constant(p).r;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    ok = ok && lo >= 0.999 && hi <= 1.001;
    return {ok, "triangle " + fmt("%.6f", tri.r) + ", " + std::to_string(symmetric.size()) +
                    " symmetric fixtures in [" + fmt("%.6f", lo) + ", " + fmt("%.6f", hi) + "]"};
}

Outcome criterion4(const std::vector<JohnRun>& runs) {
    const auto tri = gen::triangle();
    const auto cert = recenter_search(tri, hexagon_around(tri)).cert;
    bool ok = cert.size() == 3;
    double wlo = 1e9, whi = -1e9, clo = 1e9, chi = -1e9;
    for (std::size_t i = 0; i < cert.size(); ++i) {
        wlo = std::min(wlo, cert.weights[i]);
        whi = std::max(whi, cert.weights[i]);
        for (std::size_t j = 0; j < cert.size(); ++j) {
            if (i == j) continue;
            const double c = dot(cert.pairs[i].u, cert.pairs[j].v);
            clo = std::min(clo, c);
            chi = std::max(chi, c);
        }
    }
    ok = ok && wlo >= 0.6666 && whi <= 0.6668 && clo >= -0.5001 && chi <= -0.4999;
    double worst = 0.0;
    auto sum_check = [&](const JohnCertificate& c) {
        double s = 0.0;
        for (double w : c.weights) s += w;
        worst = std::max(worst, std::abs(s - 2.0));
        return within(s, 1.9999, 2.0001);
    };
    int count = 1;
    ok = sum_check(cert) && ok;
    for (const auto& r : runs) {
        ok = sum_check(r.cert) && ok;
        ++count;
    }
    return {ok, "m = " + std::to_string(cert.size()) + ", a_i in [" + fmt("%.6f", wlo) + ", " + fmt("%.6f", whi) +
                    "], <u_i, v_j> in [" + fmt("%.6f", clo) + ", " + fmt("%.6f", chi) + "], max |sum a - 2| = " +
                    fmt("%.2e", worst) + " over " + std::to_string(count) + " certificates"};
}

Outcome criterion5(const std::vector<JohnRun>& runs) {
    bool ok = runs.size() >= 10;
    double worst = std::numeric_limits<double>::infinity();
    std::string failed;
    for (const auto& r : runs) {
        const auto g = check_glmp(r.image, r.l, r.cert);
        worst = std::min(worst, g.slack);
        if (!g.holds || g.slack < -1e-7) {
            ok = false;
            failed += " " + r.name;
        }
    }
    return {ok, std::to_string(runs.size()) + " fixtures, worst slack " + fmt("%.3e", worst) +
                    (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome criterion6() {
    const auto t0 = Clock::now();
    int passed = 0, total = 0, raised = 0;
    for (int i = 0; i < 20; ++i) {
        const double r = (i + 0.5) / 20.0;
        for (int j = 0; j < 20; ++j) {
            const double eps = (j + 0.5) / 20.0 * (1.0 - r) / 2.0;
            ++total;
            if (sc::case1b_shift_stretch(eps, r).passed()) ++passed;
        }
    }
    for (int k = 0; k < 5; ++k) {
        const double r = 0.1 + 0.2 * k;
        const double eps = (1.0 - r) / 2.0 * (1.0 + k / 10.0);
        try {
            sc::case1b_shift_stretch(eps, r);
        } catch (const Error& e) {
            raised += e.code() == ErrorCode::PreconditionViolated;
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = passed == total && raised == 5 && secs <= 10.0;
    return {ok, std::to_string(passed) + "/" + std::to_string(total) + " grid points pass, " + std::to_string(raised) +
                    "/5 violations raise PreconditionViolated, " + fmt("%.2f s", secs)};
}

Outcome criterion7() {
    const double eps = 0.01;
    std::string detail;
    bool ok = true;
    auto judge = [&](const sc::Report& rep, bool contacts_zero) {
        const auto* kin = rep.assertion("K in L'");
        const auto* lin = rep.assertion("L' in -2K");
        const bool incl = kin && kin->passed && lin && lin->passed;
        const bool dual_false = rep.values.at("dual_hull_holds") == 0.0;
        const int contacts = static_cast<int>(rep.values.at("contacts"));
        const bool good = incl && rep.passed() && (contacts_zero ? contacts == 0 : dual_false);
        ok = ok && good;
        detail += (detail.empty() ? "" : "; ") + rep.id + (good ? " ok" : " FAILED") + " (contacts " +
                  std::to_string(contacts) + ", dual hull " + (dual_false ? "false" : "true") + ")";
    };
    judge(sc::case1b_stretch(sc::fixtures::case1b_k(), sc::fixtures::case1b_l(), eps), false);
    judge(sc::case1c_trapezoid_map(sc::fixtures::case1c_k(), sc::fixtures::case1c_l(), eps), false);
    judge(sc::case2b_trapezoid_perturb({}, eps), true);
    return {ok, detail};
}

Outcome criterion8() {
    const auto par = sc::case3();
    const auto h = gen::regular_polygon(6);
    const auto anti = sc::case3_parallelogram_deduction(h, h[0], h[1], h[3], h[4]);
    const auto* iii = anti.assertion("L = conv{x1, x2, x3, x4}");
    const bool ok = par.passed() && iii && !iii->passed;
    return {ok, std::string("parallelogram fixture ") + (par.passed() ? "passes" : "fails") +
                    ", hexagon anti-fixture hull residual " + fmt("%.4f", iii ? iii->residual : -1.0)};
}

Outcome criterion9() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        auto rng = seeded(9, static_cast<std::uint64_t>(i));
        const auto k = gen::random_symmetric(rng, 2 + i % 3);
        const auto l = gen::random_symmetric(rng, 2 + (i / 3) % 3);
        DistanceOptions o;
        o.seed = static_cast<std::uint64_t>(i);
        const auto d = banach_mazur_distance(k, l, o);
        worst = std::max(worst, d.r);
        bad += !d.verified || d.r > 1.5 + 1e-2;
    }
    const double secs = seconds_since(t0);
    return {bad == 0 && secs <= 600.0, "200 symmetric pairs, max d = " + fmt("%.6f", worst) + ", " +
                                           std::to_string(bad) + " violations, " + fmt("%.1f s", secs)};
}

Outcome criterion10(const fs::path& artifacts) {
    double worst = 0.0;
    int bad = 0, flagged = 0;
    for (int i = 0; i < 100; ++i) {
        auto rng = seeded(10, static_cast<std::uint64_t>(i));
        const auto k = gen::random_convex(rng, 4 + i % 3);
        const auto l = gen::random_symmetric(rng, 2 + (i / 3) % 3);
        DistanceOptions o;
        o.seed = static_cast<std::uint64_t>(i);
        const auto d = banach_mazur_distance(k, l, o);
        worst = std::max(worst, d.r);
        bad += !d.verified || d.r > 2.0 + 1e-3;
        if (d.verified && std::abs(d.r - 2.0) <= 1e-3 && k.size() != 3) {
            ++flagged;
            fs::create_directories(artifacts);
            io::write_text((artifacts / ("pinned_" + std::to_string(i) + ".json")).string(),
                           json{{"K", io::to_json(k)}, {"L", io::to_json(l)}, {"report", io::to_json(d)}}.dump(2) + "\n");
        }
    }
    return {bad == 0 && flagged == 0, "100 pairs, max d = " + fmt("%.6f", worst) + ", " + std::to_string(bad) +
                                          " violations, " + std::to_string(flagged) + " flagged artifacts"};
}

Outcome criterion11() {
    const auto t0 = Clock::now();
    const int n = 500;
    const Tolerances tol;
    int bipolar = 0, reverse = 0, john_rt = 0, report_rt = 0, compose = 0, affine = 0;
    double affine_worst = 0.0;
    for (int i = 0; i < n; ++i) {
        auto rng = seeded(11, static_cast<std::uint64_t>(i));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        // bipolarity
        const auto p = gen::random_convex(rng, 3 + i % 6);
        bipolar += same_vertex_set(polar(polar(p)), p, tol.geom);

        // duality reverses inclusion
        std::vector<Point> inner;
        for (const auto& v : p.vertices()) inner.push_back((0.3 + 0.65 * unit(rng)) * v);
        const ConvexPolygon q(inner);
        reverse += contains(p, q, 0.0) && contains(polar(q), polar(p), tol.geom);

        // certificate round-trip (John certificate and distance report)
        const auto k = gen::random_convex(rng, 3 + i % 4);
        const auto l = gen::random_convex(rng, 3 + (i / 4) % 4);
        const auto m = gen::random_symmetric(rng, 2 + i % 3);
        {
            const auto mv = max_volume_position(k, l);
            const auto image = apply_affine(mv.map, k);
            const auto cert = recenter_search(image, l).cert;
            const std::string text = io::to_json(cert).dump();
            const auto back = io::certificate_from_json(io::parse(text));
            const auto r1 = check_john_certificate(cert), r2 = check_john_certificate(back);
            john_rt += io::to_json(back).dump() == text && r1.passed && r2.passed && r1.worst == r2.worst;
        }
        DistanceOptions o;
        o.seed = static_cast<std::uint64_t>(i);
        const auto kl = banach_mazur_distance(k, l, o);
        {
            const std::string text = io::to_json(kl).dump();
            const auto back = io::distance_report_from_json(io::parse(text));
            report_rt += kl.verified && io::to_json(back).dump() == text && certify_sandwich(k, l, back, tol);
        }

        // certified composition
        const auto lm = banach_mazur_distance(l, m, o);
        const auto km = compose_witnesses(kl, lm);
        compose += kl.verified && lm.verified && certify_sandwich(k, m, km, tol) &&
                   std::abs(km.r - kl.r * lm.r) <= 1e-12 * km.r;

        // affine invariance
        const auto s = gen::random_affine(rng);
        const auto skl = banach_mazur_distance(apply_affine(s, k), l, o);
        const double diff = std::abs(skl.r - kl.r);
        affine_worst = std::max(affine_worst, diff);
        affine += skl.verified && diff <= 2e-3;
    }
    const double secs = seconds_since(t0);
    const bool ok = bipolar == n && reverse == n && john_rt == n && report_rt == n && compose == n && affine == n &&
                    secs <= 300.0;
    auto part = [&](const char* name, int c) { return std::string(name) + " " + std::to_string(c) + "/" + std::to_string(n); };
    return {ok, part("bipolarity", bipolar) + ", " + part("duality", reverse) + ", " + part("john round-trip", john_rt) +
                    ", " + part("report round-trip", report_rt) + ", " + part("composition", compose) + ", " +
                    part("affine", affine) + " (worst " + fmt("%.1e", affine_worst) + "), " + fmt("%.1f s", secs)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite: one line per criterion"};
    std::vector<int> only;
    std::string artifacts = "acceptance_artifacts";
    app.add_option("criteria", only, "run only these criteria (1-11)");
    app.add_option("--artifacts", artifacts, "directory for flagged instances");
    CLI11_PARSE(app, argc, argv);
    const std::set<int> selected(only.begin(), only.end());
    auto want = [&](int c) { return selected.empty() || selected.count(c) > 0; };

    std::vector<JohnRun> runs;
    if (want(4) || want(5)) runs = john_fixtures();

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, criterion1},
        {2, criterion2},
        {3, criterion3},
        {4, [&] { return criterion4(runs); }},
        {5, [&] { return criterion5(runs); }},
        {6, criterion6},
        {7, criterion7},
        {8, criterion8},
        {9, criterion9},
        {10, [&] { return criterion10(artifacts); }},
        {11, criterion11},
    };
    int failures = 0;
    for (const auto& [id, fn] : criteria) {
        if (!want(id)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
