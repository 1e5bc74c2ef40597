#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "meff/error.hpp"
#include "meff/quadrature.hpp"

namespace meff {

enum class Method { closed_form, quadrature_1d, quadrature_2d, monte_carlo };
const char* method_name(Method m);

struct CoefficientOptions {
    double rel_tol_2d = default_rel_tol_2d;
    std::int64_t max_evals = Quad2dOptions{}.max_evals;
    // E0 and E3 only: replace (k1,k2) by |k1||k2| in the mixed term, giving the
    // upper-bound integrands instead of the exact angular reduction.
    bool bound_form = false;
};

struct CoefficientReport {
    std::string name;
    CutoffConfig cfg;
    IntegralResult result;
    Method method;
};

// One-photon and second-order radial integrals, all closed form over [kappa, lambda].
double e2_coeff(const CutoffConfig& cfg);       // -(1/(8 pi^2)) int r^2/(r+2)
double wick_constant(const CutoffConfig& cfg);  // (1/(4 pi^2)) int r^2/(r+2), from the mode sum
double ea_coeff(const CutoffConfig& cfg);       // (1/(2 pi^2)) int 4/(r (r+2)^2)
double eb_coeff(const CutoffConfig& cfg);       // (1/(2 pi^2)) int 16 r/(r+2)^4
double c1_coeff(const CutoffConfig& cfg);
double a1_coeff(const CutoffConfig& cfg);
double a1_spinless(const CutoffConfig& cfg);
// (2/3)(1/(2 pi^2)) (1/4) int r^5/E(r)^3, the spin contribution to a1.
double a1_spin_part(const CutoffConfig& cfg);

// Radial integrands after the angular reduction, prefactors included.
enum class Integrand2d {
    E0,
    E0_bound,
    E3,
    E3_bound,
    E41,
    E42,
    E4,
    E3_first_term,   // first term of E3 alone (= -E41 integrand)
    E3_subtracted,   // first term minus the separable E2*Eb counter-term
    inv_eminus,      // 1/E-
    k11_over_rho,    // K1,1/(r1 r2)
};
Fn2 radial_integrand(Integrand2d which);
const char* integrand_name(Integrand2d which);

IntegralResult integrate_coefficient(Integrand2d which, const CutoffConfig& cfg, Region region,
                                     const CoefficientOptions& opt = {});

IntegralResult E0_coeff(const CutoffConfig& cfg, const CoefficientOptions& opt = {});
IntegralResult E3_coeff(const CutoffConfig& cfg, const CoefficientOptions& opt = {});
IntegralResult E4_coeff(const CutoffConfig& cfg, const CoefficientOptions& opt = {});
std::pair<IntegralResult, IntegralResult> E4_split(const CutoffConfig& cfg, const CoefficientOptions& opt = {});

// Unreduced two-photon integrands (without the measure) for the Monte Carlo oracle.
enum class Raw6d { E0, E3, E3_sigma_term, E4 };
Fn6 raw_integrand(Raw6d which);
const char* raw_name(Raw6d which);

// Spin-up expectation of sigma(k1,k2) built from explicit transverse polarization vectors.
double sigma_expectation(const Vec3& k1, const Vec3& k2);

struct CancellationReport {
    IntegralResult first_term;   // (i)
    double counter_term = 0.0;   // (ii), closed form
    IntegralResult difference;   // (i) - (ii), integrated directly
    double wick = 0.0;
    double eb = 0.0;
};
CancellationReport cancellation_report(const CutoffConfig& cfg, const CoefficientOptions& opt = {});

struct SeriesCoefficients {
    double a1 = 0.0;
    double a2_dominant = 0.0;
    double c1 = 0.0;
    double c2_dominant = 0.0;
    double e2 = 0.0;
    IntegralResult E0, E3, E4;
};
SeriesCoefficients meff_series(const CutoffConfig& cfg, const CoefficientOptions& opt = {});

// Dominant-term truncation 1 + a1 e^2 + a2_dominant e^4.
double meff_ratio(double e, const SeriesCoefficients& s);
double meff_ratio(double e, const CutoffConfig& cfg, const CoefficientOptions& opt = {});

struct FlowPoint {
    double lambda;
    double m;
    double kappa_over_m;
    double lambda_over_m;
    double ratio;
    double m_eff;
};

// m = (b Lambda)^beta, kappa = kappa0 Lambda^beta; m_eff = m * meff_ratio.
std::vector<FlowPoint> renorm_flow(double e, double beta, double b, double kappa0,
                                   const std::vector<double>& lambdas, const CoefficientOptions& opt = {},
                                   double lam_split = 3.0, int threads = 0);

const std::vector<std::string>& coefficient_names();
bool is_coefficient_name(const std::string& name);
CoefficientReport compute_coefficient(const std::string& name, const CutoffConfig& cfg,
                                      const CoefficientOptions& opt = {});

}  // namespace meff
