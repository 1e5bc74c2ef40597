#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meff {

enum class CriterionStatus { pass, fail, skipped };
const char* status_name(CriterionStatus s);

struct CriterionResult {
    std::string id;  // "1".."11", "S1" for supplementary checks
    std::string title;
    CriterionStatus status = CriterionStatus::fail;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct AcceptanceOptions {
    double kappa_over_m = 1.0;
    // Upper limit applied to every cutoff scan; <= 0 keeps the standard ranges
    // (1D to 1e6, 2D to 1e4, fundamental integrals to 1e5).
    double lambda_cap = 0.0;
    double rel_tol_2d = 1e-8;
    std::int64_t mc_samples = 1'000'000;
    std::uint64_t seed = 20240611;
    int threads = 0;
    bool enforce_budgets = true;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    std::string narrative;  // cancellation breakdown, plain text
    bool all_passed() const;
};

AcceptanceReport run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace meff
