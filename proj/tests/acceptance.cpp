// Acceptance gate: runs every verification suite at its pinned seeds and
// prints one pass/fail line per criterion, then a summary. Exit 0 only if
// everything passes.

#include <chrono>
#include <cstdio>
#include <exception>

#include "csde/verify.hpp"

int main() {
    const std::vector<std::pair<int, std::string>> criteria = {
        {1, "flat_bridge"},   {2, "development"},      {3, "two_route"},
        {4, "transport"},     {5, "bismut"},           {6, "omega_control"},
        {7, "newton"},        {8, "hitting"},          {9, "bridge_invariance"},
        {10, "reproducibility"},
    };

    int failures = 0;
    for (const auto& [index, suite] : criteria) {
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            auto reports = csde::verify::run_suite(suite);
            ok = csde::verify::all_pass(reports);
            for (const auto& rep : reports)
                if (!rep.pass) detail += " " + rep.name;
        } catch (const std::exception& e) {
            detail = std::string(" exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        std::printf("[%s] criterion %2d %-18s (%.1fs)%s\n", ok ? "PASS" : "FAIL",
                    index, suite.c_str(), secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("all 10 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", failures);
    return 1;
}
