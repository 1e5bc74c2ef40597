#include "meff/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "meff/kernels.hpp"
#include "parallel.hpp"

namespace meff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// 4 pi / (2 pi)^3: one-photon angular integral with the mode normalization.
constexpr double kOnePhoton = 1.0 / (2.0 * kPi * kPi);
// 8 pi^2 / (4 (2 pi)^6): two-photon measure after integrating both solid angles
// down to the relative polar angle.
constexpr double kTwoPhoton = 1.0 / (32.0 * kPi * kPi * kPi * kPi);

double e2_antideriv(double r) { return 0.5 * r * r - 2.0 * r + 4.0 * std::log(r + 2.0); }

double e2_range(const CutoffConfig& cfg) {
    validate(cfg);
    return e2_antideriv(cfg.lambda_over_m) - e2_antideriv(cfg.kappa_over_m);
}

// int_a^b dr/(r/2 + 1) = 2 ln((b+2)/(a+2))
double orbital_range(const CutoffConfig& cfg) {
    validate(cfg);
    const double a = cfg.kappa_over_m, b = cfg.lambda_over_m;
    return 2.0 * std::log1p((b - a) / (a + 2.0));
}

// int_a^b r^5/E(r)^3 dr = 8 [ln u + 2/u - 1/(2u^2)], u = r/2 + 1
double spin_range(const CutoffConfig& cfg) {
    validate(cfg);
    const double ua = 0.5 * cfg.kappa_over_m + 1.0, ub = 0.5 * cfg.lambda_over_m + 1.0;
    const double lg = std::log1p((ub - ua) / ua);
    return 8.0 * (lg + 2.0 / ub - 2.0 / ua - 0.5 / (ub * ub) + 0.5 / (ua * ua));
}

double kern(KernelFamily f, int p, double r1, double r2) { return kernel_eval({f, p, {r1, r2}}); }

}  // namespace

const char* method_name(Method m) {
    switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::quadrature_1d: return "quadrature-1d";
    case Method::quadrature_2d: return "quadrature-2d";
    case Method::monte_carlo: return "monte-carlo";
    }
    return "?";
}

// 0.0 - x keeps the empty-range value at +0.
double e2_coeff(const CutoffConfig& cfg) { return (0.0 - e2_range(cfg)) / (8.0 * kPi * kPi); }

double wick_constant(const CutoffConfig& cfg) { return e2_range(cfg) / (4.0 * kPi * kPi); }

double ea_coeff(const CutoffConfig& cfg) {
    validate(cfg);
    auto G = [](double r) { return std::log(r / (r + 2.0)) + 2.0 / (r + 2.0); };
    return kOnePhoton * (G(cfg.lambda_over_m) - G(cfg.kappa_over_m));
}

double eb_coeff(const CutoffConfig& cfg) {
    validate(cfg);
    auto H = [](double r) {
        const double s = r + 2.0;
        return -0.5 / (s * s) + 2.0 / (3.0 * s * s * s);
    };
    return kOnePhoton * 16.0 * (H(cfg.lambda_over_m) - H(cfg.kappa_over_m));
}

double c1_coeff(const CutoffConfig& cfg) { return kOnePhoton * (orbital_range(cfg) + 0.25 * spin_range(cfg)); }

double a1_coeff(const CutoffConfig& cfg) { return 2.0 / 3.0 * c1_coeff(cfg); }

double a1_spinless(const CutoffConfig& cfg) { return 2.0 / 3.0 * kOnePhoton * orbital_range(cfg); }

double a1_spin_part(const CutoffConfig& cfg) { return 2.0 / 3.0 * kOnePhoton * 0.25 * spin_range(cfg); }

Fn2 radial_integrand(Integrand2d which) {
    switch (which) {
    case Integrand2d::E0:
        return [](double r1, double r2) {
            const EnergyDenoms d = energy_denoms({r1, r2});
            const double D = k11_minus_subtraction({r1, r2});
            const double mixed = kern(KernelFamily::Khat1, 1, r1, r2) + kern(KernelFamily::K1, 1, r1, r2) -
                                 kern(KernelFamily::K2, 1, r1, r2);
            return 0.25 * kTwoPhoton *
                   (4.0 * r2 * r2 / (d.calE1 * d.calE1) * D + d.rho * mixed / (d.calE1 * d.calE2));
        };
    case Integrand2d::E0_bound:
        return [](double r1, double r2) {
            const EnergyDenoms d = energy_denoms({r1, r2});
            const double D = k11_minus_subtraction({r1, r2});
            const double K = kern(KernelFamily::K1, 1, r1, r2);
            return 0.25 * kTwoPhoton *
                   (4.0 * r2 * r2 / (d.calE1 * d.calE1) * D + 2.0 * d.rho * K / (d.calE1 * d.calE2));
        };
    case Integrand2d::E3:
        return [](double r1, double r2) {
            const EnergyDenoms d = energy_denoms({r1, r2});
            const double D = k11_minus_subtraction({r1, r2});
            const double Kh = kern(KernelFamily::Khat2, 3, r1, r2);
            const double e14 = d.calE1 * d.calE1 * d.calE1 * d.calE1;
            const double r14 = r1 * r1 * r1 * r1;
            return kTwoPhoton / 16.0 *
                   (4.0 * r14 * r2 * r2 / e14 * D - 2.0 * d.rho * d.rho * d.rho * Kh / (d.calE1 * d.calE2));
        };
    case Integrand2d::E3_bound:
        return [](double r1, double r2) {
            const EnergyDenoms d = energy_denoms({r1, r2});
            const double D = k11_minus_subtraction({r1, r2});
            const double Kh = kern(KernelFamily::Khat2, 3, r1, r2);
            const double e14 = d.calE1 * d.calE1 * d.calE1 * d.calE1;
            const double r14 = r1 * r1 * r1 * r1;
            return kTwoPhoton / 16.0 * (4.0 * r14 * r2 * r2 / e14 * D - 8.0 * d.rho * Kh);
        };
    case Integrand2d::E41:
        return [](double r1, double r2) {
            const double e1 = calE(r1);
            const double K = kern(KernelFamily::K1, 1, r1, r2);
            return -kTwoPhoton / 16.0 * 4.0 * r1 * r1 * r1 * r1 * r2 * r2 * K / (e1 * e1 * e1 * e1);
        };
    case Integrand2d::E42:
        return [](double r1, double r2) {
            const double e1 = calE(r1), e2 = calE(r2);
            const double K21 = kern(KernelFamily::K2, 1, r1, r2);
            return kTwoPhoton / 8.0 * r1 * r1 * r1 * r1 * r2 * r2 * K21 / (e1 * e1 * e1 * e2);
        };
    case Integrand2d::E4:
        return [](double r1, double r2) {
            const double e1 = calE(r1), e2 = calE(r2);
            const double K = kern(KernelFamily::K1, 1, r1, r2);
            const double K21 = kern(KernelFamily::K2, 1, r1, r2);
            const double w = r1 * r1 * r1 * r1 * r2 * r2 / (e1 * e1 * e1);
            return kTwoPhoton / 16.0 * w * (-4.0 * K / e1 + 2.0 * K21 / e2);
        };
    case Integrand2d::E3_first_term:
        return [](double r1, double r2) {
            const double e1 = calE(r1);
            const double K = kern(KernelFamily::K1, 1, r1, r2);
            return kTwoPhoton / 16.0 * 4.0 * r1 * r1 * r1 * r1 * r2 * r2 * K / (e1 * e1 * e1 * e1);
        };
    case Integrand2d::E3_subtracted:
        return [](double r1, double r2) {
            const double e1 = calE(r1);
            const double D = k11_minus_subtraction({r1, r2});
            return kTwoPhoton / 16.0 * 4.0 * r1 * r1 * r1 * r1 * r2 * r2 * D / (e1 * e1 * e1 * e1);
        };
    case Integrand2d::inv_eminus:
        return [](double r1, double r2) { return 1.0 / energy_denoms({r1, r2}).eMinus; };
    case Integrand2d::k11_over_rho:
        return [](double r1, double r2) { return kern(KernelFamily::K1, 1, r1, r2) / (r1 * r2); };
    }
    throw Error(ErrorKind::invalid_argument, "unknown integrand");
}

const char* integrand_name(Integrand2d which) {
    switch (which) {
    case Integrand2d::E0: return "E0";
    case Integrand2d::E0_bound: return "E0_bound";
    case Integrand2d::E3: return "E3";
    case Integrand2d::E3_bound: return "E3_bound";
    case Integrand2d::E41: return "E41";
    case Integrand2d::E42: return "E42";
    case Integrand2d::E4: return "E4";
    case Integrand2d::E3_first_term: return "E3_first_term";
    case Integrand2d::E3_subtracted: return "E3_subtracted";
    case Integrand2d::inv_eminus: return "inv_eminus";
    case Integrand2d::k11_over_rho: return "k11_over_rho";
    }
    return "?";
}

IntegralResult integrate_coefficient(Integrand2d which, const CutoffConfig& cfg, Region region,
                                     const CoefficientOptions& opt) {
    Quad2dOptions q;
    q.rel_tol = opt.rel_tol_2d;
    q.max_evals = opt.max_evals;
    return integrate_2d(radial_integrand(which), cfg, region, q);
}

IntegralResult E0_coeff(const CutoffConfig& cfg, const CoefficientOptions& opt) {
    return integrate_coefficient(opt.bound_form ? Integrand2d::E0_bound : Integrand2d::E0, cfg, Region::FULL, opt);
}

IntegralResult E3_coeff(const CutoffConfig& cfg, const CoefficientOptions& opt) {
    return integrate_coefficient(opt.bound_form ? Integrand2d::E3_bound : Integrand2d::E3, cfg, Region::FULL, opt);
}

IntegralResult E4_coeff(const CutoffConfig& cfg, const CoefficientOptions& opt) {
    return integrate_coefficient(Integrand2d::E4, cfg, Region::FULL, opt);
}

std::pair<IntegralResult, IntegralResult> E4_split(const CutoffConfig& cfg, const CoefficientOptions& opt) {
    return {integrate_coefficient(Integrand2d::E41, cfg, Region::FULL, opt),
            integrate_coefficient(Integrand2d::E42, cfg, Region::FULL, opt)};
}

namespace {

struct Frame {
    Vec3 e[2];
};

// Right-handed transverse frame: e1 x e2 = k/|k|.
Frame polarizations(const Vec3& k) {
    const double n = norm(k);
    const Vec3 kh = (1.0 / n) * k;
    const Vec3 ref = std::abs(kh.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    Vec3 e1 = cross(kh, ref);
    e1 = (1.0 / norm(e1)) * e1;
    const Vec3 e2 = cross(kh, e1);
    return {{e1, e2}};
}

struct RawGeom {
    double r1, r2, c, dotk, E1, E2, E12;
};

RawGeom geom(const Vec3& k1, const Vec3& k2) {
    RawGeom g{};
    g.r1 = norm(k1);
    g.r2 = norm(k2);
    g.dotk = dot(k1, k2);
    g.c = g.dotk / (g.r1 * g.r2);
    g.E1 = calE(g.r1);
    g.E2 = calE(g.r2);
    const Vec3 s = k1 + k2;
    g.E12 = 0.5 * dot(s, s) + g.r1 + g.r2;
    return g;
}

}  // namespace

double sigma_expectation(const Vec3& k1, const Vec3& k2) {
    const Frame f1 = polarizations(k1), f2 = polarizations(k2);
    double total = 0.0;
    for (const Vec3& a : f1.e) {
        for (const Vec3& b : f2.e) {
            const Vec3 b1 = cross(k1, a), b2 = cross(k2, b);
            const Vec3 v = cross(b1, b2);
            // <up| sigma.v |up> picks the z component.
            total += v.z * dot(b1, b2);
        }
    }
    return total;
}

Fn6 raw_integrand(Raw6d which) {
    switch (which) {
    case Raw6d::E0:
        return [](const Vec3& k1, const Vec3& k2) {
            const RawGeom g = geom(k1, k2);
            const double t1 = 4.0 * g.r2 * g.r2 / (g.E1 * g.E1 * g.E12);
            const double t2 = 4.0 * g.r2 * g.r2 / (g.E1 * g.E1 * g.E2);
            const double t3 = g.dotk * (1.0 + g.c) / (g.E1 * g.E2 * g.E12);
            return 0.25 / (g.r1 * g.r2) * (t1 - t2 + t3);
        };
    case Raw6d::E3:
        return [](const Vec3& k1, const Vec3& k2) {
            const RawGeom g = geom(k1, k2);
            const double w = 4.0 * std::pow(g.r1, 4) * g.r2 * g.r2 / std::pow(g.E1, 4);
            const double t3 = -2.0 * g.r1 * g.r1 * g.r2 * g.r2 * (1.0 - g.c * g.c) * g.dotk /
                              (g.E1 * g.E2 * std::pow(g.E12, 3));
            return (w / g.E12 - w / g.E2 + t3) / (16.0 * g.r1 * g.r2);
        };
    case Raw6d::E3_sigma_term:
        return [](const Vec3& k1, const Vec3& k2) {
            const RawGeom g = geom(k1, k2);
            return g.dotk * sigma_expectation(k1, k2) / (g.E1 * g.E2 * std::pow(g.E12, 3)) / (16.0 * g.r1 * g.r2);
        };
    case Raw6d::E4:
        return [](const Vec3& k1, const Vec3& k2) {
            const RawGeom g = geom(k1, k2);
            const double t1 = 4.0 * std::pow(g.r1, 4) * g.r2 * g.r2 / (std::pow(g.E1, 4) * g.E12);
            const double t2 = (-2.0 * g.r1 * g.r1 * g.r2 * g.r2 * (1.0 - g.c * g.c) + sigma_expectation(k1, k2)) *
                              g.r1 * g.r1 / (std::pow(g.E1, 3) * g.E2 * g.E12);
            return -(t1 + t2) / (16.0 * g.r1 * g.r2);
        };
    }
    throw Error(ErrorKind::invalid_argument, "unknown raw integrand");
}

const char* raw_name(Raw6d which) {
    switch (which) {
    case Raw6d::E0: return "E0";
    case Raw6d::E3: return "E3";
    case Raw6d::E3_sigma_term: return "E3_sigma_term";
    case Raw6d::E4: return "E4";
    }
    return "?";
}

CancellationReport cancellation_report(const CutoffConfig& cfg, const CoefficientOptions& opt) {
    CancellationReport rep;
    rep.first_term = integrate_coefficient(Integrand2d::E3_first_term, cfg, Region::FULL, opt);
    rep.wick = wick_constant(cfg);
    rep.eb = eb_coeff(cfg);
    rep.counter_term = 0.25 * rep.wick * rep.eb;
    rep.difference = integrate_coefficient(Integrand2d::E3_subtracted, cfg, Region::FULL, opt);
    return rep;
}

SeriesCoefficients meff_series(const CutoffConfig& cfg, const CoefficientOptions& opt) {
    SeriesCoefficients s;
    s.e2 = e2_coeff(cfg);
    s.c1 = c1_coeff(cfg);
    s.a1 = 2.0 / 3.0 * s.c1;
    s.E0 = E0_coeff(cfg, opt);
    s.E3 = E3_coeff(cfg, opt);
    s.E4 = E4_coeff(cfg, opt);
    s.c2_dominant = 2.0 * s.E4.value + s.E0.value + s.E3.value;
    s.a2_dominant = 2.0 / 3.0 * s.c2_dominant + 4.0 / 9.0 * s.c1 * s.c1;
    return s;
}

double meff_ratio(double e, const SeriesCoefficients& s) {
    if (e == 0.0) return 1.0;
    const double e2 = e * e;
    return 1.0 + s.a1 * e2 + s.a2_dominant * e2 * e2;
}

double meff_ratio(double e, const CutoffConfig& cfg, const CoefficientOptions& opt) {
    validate(cfg);
    if (e == 0.0) return 1.0;
    return meff_ratio(e, meff_series(cfg, opt));
}

std::vector<FlowPoint> renorm_flow(double e, double beta, double b, double kappa0, const std::vector<double>& lambdas,
                                   const CoefficientOptions& opt, double lam_split, int threads) {
    if (!(beta < 0.0)) throw Error(ErrorKind::invalid_argument, "renorm_flow requires beta < 0");
    if (!(b > 0.0)) throw Error(ErrorKind::invalid_argument, "renorm_flow requires b > 0");
    if (!(kappa0 > 0.0)) throw Error(ErrorKind::invalid_argument, "renorm_flow requires kappa0 > 0");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0)) throw Error(ErrorKind::invalid_argument, "cutoffs must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw Error(ErrorKind::invalid_argument, "lambdas must be increasing");
    }
    std::vector<FlowPoint> out(lambdas.size());
    detail::parallel_for(lambdas.size(), threads, [&](std::size_t i) {
        const double L = lambdas[i];
        FlowPoint p{};
        p.lambda = L;
        p.m = std::pow(b * L, beta);
        p.kappa_over_m = kappa0 / std::pow(b, beta);
        p.lambda_over_m = std::pow(L, 1.0 - beta) / std::pow(b, beta);
        CutoffConfig cfg{p.kappa_over_m, p.lambda_over_m, lam_split};
        p.ratio = meff_ratio(e, cfg, opt);
        p.m_eff = p.m * p.ratio;
        out[i] = p;
    });
    return out;
}

const std::vector<std::string>& coefficient_names() {
    static const std::vector<std::string> names{"e2", "ea", "eb", "c1", "a1", "a1_spinless",
                                                "E0", "E3", "E4", "E41", "E42", "a2_dominant"};
    return names;
}

bool is_coefficient_name(const std::string& name) {
    const auto& n = coefficient_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

CoefficientReport compute_coefficient(const std::string& name, const CutoffConfig& cfg,
                                      const CoefficientOptions& opt) {
    validate(cfg);
    CoefficientReport rep{name, cfg, {}, Method::closed_form};
    auto closed = [&](double v) {
        // Closed forms: error is a few ulps of the antiderivative values involved.
        return IntegralResult{v, 16.0 * kEps * std::abs(v), 1};
    };
    if (name == "e2") rep.result = closed(e2_coeff(cfg));
    else if (name == "ea") rep.result = closed(ea_coeff(cfg));
    else if (name == "eb") rep.result = closed(eb_coeff(cfg));
    else if (name == "c1") rep.result = closed(c1_coeff(cfg));
    else if (name == "a1") rep.result = closed(a1_coeff(cfg));
    else if (name == "a1_spinless") rep.result = closed(a1_spinless(cfg));
    else {
        rep.method = Method::quadrature_2d;
        if (name == "E0") rep.result = E0_coeff(cfg, opt);
        else if (name == "E3") rep.result = E3_coeff(cfg, opt);
        else if (name == "E4") rep.result = E4_coeff(cfg, opt);
        else if (name == "E41") rep.result = integrate_coefficient(Integrand2d::E41, cfg, Region::FULL, opt);
        else if (name == "E42") rep.result = integrate_coefficient(Integrand2d::E42, cfg, Region::FULL, opt);
        else if (name == "a2_dominant") {
            const SeriesCoefficients s = meff_series(cfg, opt);
            rep.result.value = s.a2_dominant;
            rep.result.abs_err = 2.0 / 3.0 * (2.0 * s.E4.abs_err + s.E0.abs_err + s.E3.abs_err);
            rep.result.n_eval = s.E0.n_eval + s.E3.n_eval + s.E4.n_eval;
        } else
            throw Error(ErrorKind::not_found, "unknown coefficient: " + name);
    }
    return rep;
}

}  // namespace meff
