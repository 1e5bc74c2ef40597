// Runs every acceptance criterion and prints one PASS/FAIL/SKIPPED line each.
// Exit status is nonzero when any criterion fails.
#include <cstdio>
#include <cstdlib>

#include "meff/acceptance.hpp"

int main(int argc, char** argv) {
    meff::AcceptanceOptions opt;
    if (argc > 1) opt.lambda_cap = std::atof(argv[1]);
    const meff::AcceptanceReport rep = meff::run_acceptance(opt);
    int failed = 0;
    for (const auto& c : rep.criteria) {
        std::printf("%-7s criterion %-3s %s (%.2fs, budget %.0fs): %s\n", meff::status_name(c.status), c.id.c_str(),
                    c.title.c_str(), c.seconds, c.budget_seconds, c.detail.c_str());
        if (c.status == meff::CriterionStatus::fail) ++failed;
    }
    std::printf("\n%s", rep.narrative.c_str());
    std::printf("\n%d of %zu criteria failed\n", failed, rep.criteria.size());
    return failed == 0 ? 0 : 1;
}
