// Runs every acceptance criterion and prints one pass/fail line each.

#include <cstdio>

#include "piston/acceptance.hpp"

int main() {
    int failures = 0;
    for (const auto& name : piston::acceptance::criterion_names()) {
        auto r = piston::acceptance::run_criterion(name);
        std::printf("[%s] %-24s (%.2fs)%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.elapsed_s, r.details.empty() ? "" : "  ",
                    r.details.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
