// Runs the complete acceptance matrix and prints one verdict line per
// criterion. Returns 0 only if every criterion is met (a soft criterion may
// be met through an explicitly inconclusive statistical outcome; it is
// annotated on its line).

#include <cstdio>
#include <cstdlib>
#include <string>

#include "bessel/acceptance.hpp"

int main() {
    bessel::AcceptanceOptions opt;
    if (const char* env = std::getenv("BESSEL_BEL_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') opt.seed = v;
    }
    opt.progress = [](const std::string& line) { std::fprintf(stderr, "... %s\n", line.c_str()); };

    const auto items = bessel::run_acceptance(opt);
    int met = 0;
    for (const auto& it : items) {
        std::printf("criterion %2d [%s]%s %s\n", it.criterion, it.met ? "PASS" : "FAIL",
                    it.soft ? " (soft)" : "", it.title.c_str());
        if (it.met) ++met;
    }
    std::printf("%d/%zu acceptance criteria met\n", met, items.size());
    return bessel::all_met(items) ? 0 : 1;
}
