// Banach-Mazur distances between the regular polygons with 3 to 8 sides.

#include <cstdio>

#include "bmforge/distance.hpp"
#include "bmforge/generators.hpp"

using namespace bmforge;

int main() {
    DistanceOptions opt;
    opt.restarts = 16;
    std::printf("    ");
    for (int m = 3; m <= 8; ++m) std::printf("%9d", m);
    std::printf("\n");
    for (int n = 3; n <= 8; ++n) {
        std::printf("%4d", n);
        for (int m = 3; m <= 8; ++m) {
            if (m < n) {
                std::printf("%9s", "");
                continue;
            }
            const auto rep = banach_mazur_distance(gen::regular_polygon(n), gen::regular_polygon(m), opt);
            std::printf("%9.5f", rep.r);
        }
        std::printf("\n");
    }
    return 0;
}
