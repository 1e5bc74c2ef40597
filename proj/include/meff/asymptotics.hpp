#pragma once

#include <functional>
#include <string>
#include <vector>

#include "meff/coefficients.hpp"
#include "meff/quadrature.hpp"

namespace meff {

enum class RateModel { LOG, LOG2, SQRT, LAMBDA2 };
const char* model_name(RateModel m);
RateModel parse_model(const std::string& s);  // throws invalid_argument
double model_value(RateModel m, double lambda_over_m);
inline constexpr RateModel all_models[] = {RateModel::LOG, RateModel::LOG2, RateModel::SQRT, RateModel::LAMBDA2};

struct ScanPoint {
    double lambda_over_m = 0.0;
    double value = 0.0;
    double abs_err = 0.0;
    bool ok = true;
    std::string error;  // set when the evaluator failed; value then holds the best estimate
};

struct ScanSeries {
    std::string coefficient_name;
    std::vector<ScanPoint> points;
};

struct RateFit {
    RateModel model;
    double coefficient;  // slope of value against model(Lambda)
    double intercept;
    double residual;     // sqrt(SS_res / SS_tot); 0 when the data are constant
    // Band of value/model(Lambda) over the top decade of the scan.
    double plateau_lo, plateau_hi;
    // Same band after removing the fitted intercept: (value - intercept)/model(Lambda).
    double corrected_lo, corrected_hi;
};

// lo, lo*10^(1/k), ..., hi (hi included when it lands on the grid within rounding).
std::vector<double> geometric_grid(double lo, double hi, int per_decade);

using Evaluator = std::function<IntegralResult(const CutoffConfig&)>;

// Points run element-parallel; output order follows lambdas.
ScanSeries scan(const std::string& name, const Evaluator& eval, const CutoffConfig& base,
                const std::vector<double>& lambdas, int threads = 0);
ScanSeries scan(const std::string& coefficient, const CutoffConfig& base, const std::vector<double>& lambdas,
                const CoefficientOptions& opt = {}, int threads = 0);

RateFit fit_rate(const ScanSeries& series, RateModel model);
// All four models, best first; near-ties go to the slower-growing model.
std::vector<RateFit> model_select(const ScanSeries& series);

struct Band {
    double lo, hi;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};
// value/model(Lambda) over points with lambda in [lo, hi].
Band plateau_band(const ScanSeries& series, RateModel model, double lambda_lo, double lambda_hi);

struct LimitBracket {
    bool plateau;    // relative spread over the top decade below tolerance and shrinking
    double lo, hi;
    double spread;   // (hi - lo)/|mid| over the top decade
};
LimitBracket bracket_limit(const std::vector<double>& lambdas, const std::vector<double>& values,
                           double rel_tol = 0.05);

// Least-squares slope of log|value| against log Lambda.
double power_exponent(const ScanSeries& series);

}  // namespace meff
