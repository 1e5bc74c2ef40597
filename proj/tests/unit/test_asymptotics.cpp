#include <doctest.h>

#include <cmath>
#include <functional>

#include "meff/asymptotics.hpp"
#include "meff/coefficients.hpp"
#include "meff/error.hpp"
#include "meff/kernels.hpp"

using namespace meff;

namespace {

constexpr double kPi = 3.14159265358979323846;

ScanSeries synthetic(const std::function<double(double)>& f, double lo, double hi, int per_decade = 5) {
    ScanSeries s;
    s.coefficient_name = "synthetic";
    for (double L : geometric_grid(lo, hi, per_decade)) s.points.push_back({L, f(L), 0.0, true, {}});
    return s;
}

}  // namespace

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(10, 1000, 5);
    CHECK(g.size() == 11);
    CHECK(g.front() == 10.0);
    CHECK(g.back() == 1000.0);
    CHECK(g[5] == doctest::Approx(100).epsilon(1e-13));
    CHECK(geometric_grid(3, 3, 5).size() == 1);
    CHECK_THROWS_AS(geometric_grid(10, 1, 5), Error);
    CHECK_THROWS_AS(geometric_grid(1, 10, 0), Error);
}

TEST_CASE("exact synthetic data is recovered by each model") {
    for (RateModel m : all_models) {
        const double c = -2.5, d = 0.75;
        const ScanSeries s = synthetic([&](double L) { return c * model_value(m, L) + d; }, 10, 1e5);
        const RateFit f = fit_rate(s, m);
        INFO(model_name(m));
        CHECK(std::abs(f.coefficient / c - 1) < 1e-8);
        CHECK(f.residual < 1e-10);
        CHECK(model_select(s).front().model == m);
    }
}

TEST_CASE("exact Lambda^2 and log data") {
    const RateFit a = fit_rate(synthetic([](double L) { return 7 * L * L; }, 10, 1e4), RateModel::LAMBDA2);
    CHECK(std::abs(a.coefficient - 7) < 1e-8 * 7);
    CHECK(a.residual < 1e-10);
    const RateFit b = fit_rate(synthetic([](double L) { return 3 * std::log(L) + 1; }, 10, 1e4), RateModel::LOG);
    CHECK(std::abs(b.coefficient - 3) < 1e-8 * 3);
    CHECK(std::abs(b.intercept - 1) < 1e-8);
}

TEST_CASE("constant series fits LOG with zero slope") {
    const RateFit f = fit_rate(synthetic([](double) { return 4.2; }, 10, 1e4), RateModel::LOG);
    CHECK(std::abs(f.coefficient) < 1e-12);
    CHECK(f.residual == 0.0);
    CHECK(std::abs(f.intercept - 4.2) < 1e-12);
}

TEST_CASE("degenerate designs are rejected") {
    ScanSeries s;
    for (int i = 0; i < 5; ++i) s.points.push_back({10.0, 1.0 + i, 0, true, {}});
    try {
        fit_rate(s, RateModel::LOG);
        FAIL("expected degenerate fit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_fit);
    }
    CHECK_THROWS_AS(model_select(synthetic([](double L) { return L; }, 10, 100)), Error);
}

TEST_CASE("failed scan points are excluded from fits") {
    ScanSeries s = synthetic([](double L) { return 2 * std::log(L); }, 10, 1e4);
    s.points[3].ok = false;
    s.points[3].value = 1e30;
    CHECK(std::abs(fit_rate(s, RateModel::LOG).coefficient - 2) < 1e-10);
}

TEST_CASE("coefficient scans") {
    const CutoffConfig base{1, 10, 3};
    const ScanSeries a = scan("a1", base, {10, 100, 1000});
    REQUIRE(a.points.size() == 3);
    CHECK(a.points[0].value < a.points[1].value);
    CHECK(a.points[1].value < a.points[2].value);
    const ScanSeries e = scan("e2", base, {10, 100, 1000});
    for (const auto& p : e.points) CHECK(p.value < 0);
    CHECK(e.points[1].value < e.points[0].value);
    CHECK(e.points[2].value < e.points[1].value);
    CHECK(scan("E4", base, {1.0}).points[0].value == 0.0);
    CHECK_THROWS_AS(scan("nope", base, {10.0}), Error);
}

TEST_CASE("a1 log rate") {
    const ScanSeries s = scan("a1", {1, 10, 3}, geometric_grid(1e2, 1e6, 5));
    const auto ranked = model_select(s);
    CHECK(ranked.front().model == RateModel::LOG);
    const RateFit f = fit_rate(s, RateModel::LOG);
    CHECK(std::abs(f.coefficient / (4 / (3 * kPi * kPi)) - 1) < 0.01);
    CHECK(f.plateau_lo > 0);
    // Band narrows as the scan extends.
    const RateFit g = fit_rate(scan("a1", {1, 10, 3}, geometric_grid(1e2, 1e5, 5)), RateModel::LOG);
    CHECK((f.plateau_hi - f.plateau_lo) < (g.plateau_hi - g.plateau_lo));
}

TEST_CASE("E4 rate is a negative Lambda^2 plateau") {
    const ScanSeries s = scan("E4", {1, 10, 3}, geometric_grid(1e2, 1e4, 5));
    const auto ranked = model_select(s);
    CHECK(ranked.front().model == RateModel::LAMBDA2);
    CHECK(ranked.front().coefficient < 0);
    const Band b = plateau_band(s, RateModel::LAMBDA2, 1e3, 1e4);
    const double mid = std::abs(b.mid());
    CHECK(b.hi < 0);
    CHECK(b.lo >= -10 * mid);
    CHECK(b.hi <= -0.1 * mid);
}

TEST_CASE("E42 over Lambda^2 decays") {
    const ScanSeries s = scan("E42", {1, 10, 3}, {1e2, 1e3, 1e4});
    const double r2 = std::abs(s.points[1].value) / 1e6, r3 = std::abs(s.points[2].value) / 1e8;
    CHECK(r3 < r2);
    const ScanSeries e41 = scan("E41", {1, 10, 3}, {1e3, 1e4});
    CHECK(e41.points[0].value < 0);
    CHECK(e41.points[1].value < 0);
}

TEST_CASE("fundamental integrals") {
    const auto grid = geometric_grid(1e2, 1e5, 5);
    auto eval = [](Integrand2d w) {
        return [w](const CutoffConfig& cfg) { return integrate_coefficient(w, cfg, Region::FULL); };
    };
    const ScanSeries a = scan("inv_eminus", eval(Integrand2d::inv_eminus), {1, 10, 3}, grid);
    CHECK(model_select(a).front().model == RateModel::SQRT);
    CHECK(std::abs(power_exponent(a) - 0.5) <= 0.05);
    const ScanSeries b = scan("k11_over_rho", eval(Integrand2d::k11_over_rho), {1, 10, 3}, grid);
    CHECK(model_select(b).front().model == RateModel::LOG);
}

TEST_CASE("E2 over Lambda^2 plateaus") {
    const auto grid = geometric_grid(1e3, 1e5, 5);
    std::vector<double> v;
    for (double L : grid) v.push_back(std::abs(e2_coeff({1, L, 3})) / (L * L));
    const LimitBracket b = bracket_limit(grid, v);
    CHECK(b.plateau);
    CHECK(b.lo > 0);
}

TEST_CASE("E0 and E3 stay bounded by a log^2 envelope") {
    // Boundedness only: |E|/ln^2 does not run away between 1e3 and 1e4 at the LOG2 slope.
    for (const char* name : {"E0", "E3"}) {
        const ScanSeries s = scan(name, {1, 10, 3}, geometric_grid(1e2, 1e4, 5));
        const RateFit f = fit_rate(s, RateModel::LOG2);
        const double top = std::log(1e4);
        INFO(name);
        CHECK(std::abs(s.points.back().value) <= 2 * std::abs(f.coefficient) * top * top);
    }
}

TEST_CASE("model names round-trip") {
    for (RateModel m : all_models) CHECK(parse_model(model_name(m)) == m);
    CHECK_THROWS_AS(parse_model("CUBIC"), Error);
}
