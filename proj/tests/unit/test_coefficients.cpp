#include <doctest.h>

#include <cmath>
#include <random>

#include "meff/asymptotics.hpp"
#include "meff/coefficients.hpp"
#include "meff/error.hpp"
#include "meff/quadrature.hpp"

using namespace meff;

namespace {

constexpr double kPi = 3.14159265358979323846;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent 1D integrands; the frozen values below are mpmath quadratures of these on [1, 1000].
double c1_integrand(double r) { return (2 / (r + 2) + 2 * r * r / std::pow(r + 2, 3)) / (2 * kPi * kPi); }
double spin_integrand(double r) { return 2 / (3 * kPi * kPi) * r * r / std::pow(r + 2, 3); }
double e2_integrand(double r) { return -r * r / (r + 2) / (8 * kPi * kPi); }
double ea_integrand(double r) { return 4 / (r * (r + 2) * (r + 2)) / (2 * kPi * kPi); }
double eb_integrand(double r) { return 16 * r / std::pow(r + 2, 4) / (2 * kPi * kPi); }

}  // namespace

TEST_CASE("1D closed forms match frozen mpmath values at L = 1000") {
    const CutoffConfig cfg{1, 1000, 3};
    CHECK(rel(c1_coeff(cfg), 1.065408548454668096934302) < 1e-13);
    CHECK(rel(a1_coeff(cfg), 0.7102723656364453979562013) < 1e-13);
    CHECK(rel(a1_spin_part(cfg), 0.3177445764891725095367803) < 1e-13);
    CHECK(rel(ea_coeff(cfg), 0.02188251979355555941838039) < 1e-12);
    CHECK(rel(eb_coeff(cfg), 0.02501717307668881802863879) < 1e-12);
    CHECK(rel(e2_coeff(cfg), -6307.557075299319665379957) < 1e-13);
}

TEST_CASE("e2 on [1, 3] is -(1/(2 pi^2)) ln(5/3)") {
    CHECK(rel(e2_coeff({1, 3, 3}), -std::log(5.0 / 3.0) / (2 * kPi * kPi)) < 1e-14);
}

TEST_CASE("empty range gives zero for every coefficient") {
    const CutoffConfig cfg{2, 2, 3};
    for (const auto& name : coefficient_names()) {
        INFO(name);
        CHECK(compute_coefficient(name, cfg).result.value == 0.0);
    }
    const CancellationReport r = cancellation_report(cfg);
    CHECK(r.first_term.value == 0.0);
    CHECK(r.counter_term == 0.0);
    CHECK(r.difference.value == 0.0);
}

TEST_CASE("closed forms agree with 1D quadrature of independent integrands") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const double k = std::exp(std::log(0.05) + u(rng) * std::log(40.0));
        const double L = k * std::exp(u(rng) * std::log(1e5));
        const CutoffConfig cfg{k, L, 3};
        CHECK(rel(c1_coeff(cfg), integrate_1d(c1_integrand, k, L).value) < 1e-9);
        CHECK(rel(a1_coeff(cfg), 2.0 / 3.0 * integrate_1d(c1_integrand, k, L).value) < 1e-9);
        CHECK(rel(a1_spin_part(cfg), integrate_1d(spin_integrand, k, L).value) < 1e-9);
        CHECK(rel(a1_spinless(cfg), a1_coeff(cfg) - a1_spin_part(cfg)) < 1e-12);
        CHECK(rel(e2_coeff(cfg), integrate_1d(e2_integrand, k, L).value) < 1e-9);
        CHECK(rel(ea_coeff(cfg), integrate_1d(ea_integrand, k, L).value) < 1e-9);
        CHECK(rel(eb_coeff(cfg), integrate_1d(eb_integrand, k, L).value) < 1e-9);
        CHECK(a1_coeff(cfg) - a1_spinless(cfg) > 0);
        CHECK(e2_coeff(cfg) <= 0);
        CHECK(ea_coeff(cfg) >= 0);
        CHECK(eb_coeff(cfg) >= 0);
        CHECK(rel(wick_constant(cfg), -2 * e2_coeff(cfg)) < 1e-14);
    }
}

TEST_CASE("a1 is two thirds of c1 to machine precision") {
    for (double L : {2.0, 10.0, 1e3, 1e6}) {
        const CutoffConfig cfg{1, L, 3};
        CHECK(std::abs(a1_coeff(cfg) - 2.0 / 3.0 * c1_coeff(cfg)) <= 4e-16 * a1_coeff(cfg));
    }
}

TEST_CASE("ea and eb converge as L grows") {
    CHECK(rel(ea_coeff({1, 1e6, 3}), ea_coeff({1, 1e5, 3})) < 0.01);
    CHECK(rel(eb_coeff({1, 1e6, 3}), eb_coeff({1, 1e5, 3})) < 0.01);
}

TEST_CASE("E41 + E42 = E4 and E4 is negative") {
    const CutoffConfig cfg{1, 100, 3};
    const auto [e41, e42] = E4_split(cfg);
    const IntegralResult e4 = E4_coeff(cfg);
    CHECK(rel(e41.value + e42.value, e4.value) < 1e-6);
    CHECK(e4.value < 0);
    CHECK(E4_coeff({1, 1e3, 3}).value < 0);
}

TEST_CASE("region II1 carries most of E41 at L = 1e4") {
    const CutoffConfig cfg{1, 1e4, 3};
    const double full = integrate_coefficient(Integrand2d::E41, cfg, Region::FULL).value;
    const double ii1 = integrate_coefficient(Integrand2d::E41, cfg, Region::II1).value;
    CHECK(ii1 / full >= 0.9);
}

TEST_CASE("2D coefficients are stable under halving rel_tol") {
    const CutoffConfig cfg{1, 300, 3};
    CoefficientOptions a, b;
    b.rel_tol_2d = a.rel_tol_2d / 2;
    CHECK(rel(E0_coeff(cfg, a).value, E0_coeff(cfg, b).value) < 1e-6);
    CHECK(rel(E3_coeff(cfg, a).value, E3_coeff(cfg, b).value) < 1e-6);
    CHECK(rel(E4_coeff(cfg, a).value, E4_coeff(cfg, b).value) < 1e-6);
}

TEST_CASE("E0 agrees with the 6D Monte Carlo of its raw integrand") {
    const CutoffConfig cfg{1, 10, 3};
    const IntegralResult reduced = E0_coeff(cfg);
    const IntegralResult mc = mc_integrate_6d(raw_integrand(Raw6d::E0), cfg, 400000, 2024);
    CHECK(std::abs(mc.value - reduced.value) <= 3 * mc.abs_err);
}

TEST_CASE("E3 and E4 agree with their 6D Monte Carlo") {
    const CutoffConfig cfg{1, 10, 3};
    const IntegralResult mc3 = mc_integrate_6d(raw_integrand(Raw6d::E3), cfg, 400000, 77);
    CHECK(std::abs(mc3.value - E3_coeff(cfg).value) <= 3 * mc3.abs_err);
    const IntegralResult mc4 = mc_integrate_6d(raw_integrand(Raw6d::E4), cfg, 400000, 78);
    CHECK(std::abs(mc4.value - E4_coeff(cfg).value) <= 3 * mc4.abs_err);
}

TEST_CASE("the sigma term of E3 vanishes") {
    const CutoffConfig cfg{1, 10, 3};
    const IntegralResult mc = mc_integrate_6d(raw_integrand(Raw6d::E3_sigma_term), cfg, 400000, 3);
    CHECK(std::abs(mc.value) <= 3 * mc.abs_err);
    const Vec3 k1{0.3, -1.2, 2.0}, k2{-0.7, 0.4, 1.1};
    CHECK(std::abs(sigma_expectation(k1, k2) + sigma_expectation(k2, k1)) < 1e-14);
}

TEST_CASE("bound form integrands dominate the exact ones") {
    const CutoffConfig cfg{1, 50, 3};
    CoefficientOptions bound;
    bound.bound_form = true;
    CHECK(E0_coeff(cfg, bound).value >= E0_coeff(cfg).value);
}

TEST_CASE("cancellation of the Lambda^2 pieces") {
    const CutoffConfig cfg{1, 1e4, 3};
    const CancellationReport r = cancellation_report(cfg);
    const double L2 = 1e8;
    CHECK(r.first_term.value / L2 > 0);
    CHECK(rel(r.first_term.value / L2, r.counter_term / L2) < 0.1);
    CHECK(std::abs(r.difference.value) < 1e-3 * std::abs(r.first_term.value));
    CHECK(rel(r.difference.value, r.first_term.value - r.counter_term) < 1e-3);
}

TEST_CASE("series coefficients and the mass ratio") {
    const CutoffConfig cfg{1, 100, 3};
    const SeriesCoefficients s = meff_series(cfg);
    CHECK(rel(s.a1, 2.0 / 3.0 * s.c1) < 1e-15);
    CHECK(s.a2_dominant < 0);
    CHECK(meff_ratio(0.0, cfg) == 1.0);
    const double e = 0.01;
    CHECK(rel(meff_ratio(e, s), 1 + s.a1 * e * e + s.a2_dominant * std::pow(e, 4)) < 1e-15);
    const double a2_top = compute_coefficient("a2_dominant", {1, 1e4, 3}).result.value;
    CHECK(a2_top < 0);
}

TEST_CASE("renormalization flow") {
    const std::vector<double> lambdas = geometric_grid(1, 1000, 5);
    const auto free = renorm_flow(0.0, -1.0, 1.0, 1.0, lambdas);
    for (const auto& p : free) CHECK(p.m_eff == p.m);
    const auto flow = renorm_flow(0.3, -1.0, 1.0, 1.0, lambdas);
    std::vector<double> meff;
    for (const auto& p : flow) {
        CHECK(rel(p.ratio, meff_ratio(0.3, CutoffConfig{p.kappa_over_m, p.lambda_over_m, 3})) < 1e-12);
        meff.push_back(std::abs(p.m_eff));
    }
    // Lambda/m grows like Lambda^2 here, so |m_eff| ~ Lambda^3 once the e^4 term dominates.
    CHECK(meff.back() > 100 * meff[5]);
    CHECK_FALSE(bracket_limit(lambdas, meff).plateau);
    CHECK_THROWS_AS(renorm_flow(0.1, 0.5, 1, 1, lambdas), Error);
}

TEST_CASE("compute_coefficient dispatch") {
    const CutoffConfig cfg{1, 10, 3};
    CHECK(compute_coefficient("a1", cfg).method == Method::closed_form);
    CHECK(compute_coefficient("E4", cfg).method == Method::quadrature_2d);
    CHECK(std::string(method_name(Method::quadrature_2d)) == "quadrature-2d");
    CHECK_THROWS_AS(compute_coefficient("nope", cfg), Error);
    CHECK(coefficient_names().size() == 12);
}
