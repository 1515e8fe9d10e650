// Replays every built-in construction, prints its assertions and writes one
// SVG figure per scenario into the directory given on the command line.

#include <cstdio>
#include <filesystem>
#include <string>

#include "bmforge/io.hpp"
#include "bmforge/replay.hpp"
#include "bmforge/svg.hpp"

using namespace bmforge;

int main(int argc, char** argv) {
    const std::filesystem::path out = argc > 1 ? argv[1] : ".";
    std::filesystem::create_directories(out);
    int failed = 0;
    for (const auto& id : scenario::scenario_ids()) {
        const auto rep = scenario::run_scenario(io::json{{"id", id}});
        std::printf("%s: %s\n", id.c_str(), rep.passed() ? "pass" : "FAIL");
        for (const auto& a : rep.assertions)
            std::printf("  %-4s %-44s %.3e\n", a.passed ? "ok" : "bad", a.name.c_str(), a.residual);
        io::write_text((out / (id + ".svg")).string(), svg::render(rep));
        failed += rep.passed() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
