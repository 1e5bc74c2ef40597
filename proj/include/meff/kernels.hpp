#pragma once

#include <array>

namespace meff {

struct RadialPoint {
    double r1;
    double r2;
};

struct EnergyDenoms {
    double calE1;   // E(r1) = r1^2/2 + r1
    double calE2;   // E(r2)
    double calR;    // (r1^2 + r2^2)/2 + r1 + r2
    double ePlus;   // R + r1 r2
    double eMinus;  // R - r1 r2, computed as (r1-r2)^2/2 + r1 + r2
    double zeta;    // r1 r2 / R
    double rho;     // r1 r2
};

enum class KernelFamily { K1, K2, Khat1, Khat2 };

struct KernelId {
    KernelFamily family;
    int p;
};

struct KernelRequest {
    KernelFamily family;
    int p;
    RadialPoint point;
};

// Below this zeta the hybrid evaluator uses the power series.
inline constexpr double zeta_switch = 0.05;

// One-photon dispersion E(r) = r^2/2 + r.
inline double calE(double r) { return 0.5 * r * r + r; }

EnergyDenoms energy_denoms(RadialPoint point);

bool kernel_supported(KernelFamily family, int p);
const std::array<KernelId, 9>& kernel_ids();
const char* kernel_name(KernelFamily family);

// log(E+/E-) without cancellation: log1p(2 rho / E-).
double log_ratio(const EnergyDenoms& d);

double kernel_closed(const KernelRequest& req);

struct SeriesValue {
    double value;
    double tail_bound;  // bound on |full series - partial sum|
};

SeriesValue kernel_series_bounded(const KernelRequest& req, int n_max);
double kernel_series(const KernelRequest& req, int n_max);

// Series below zeta_switch, closed form above.
double kernel_eval(const KernelRequest& req);

// Fixed-order Gauss-Legendre quadrature of the defining theta integral.
double angular_oracle(const KernelRequest& req, int n_nodes);

// K1,1(r1,r2) - 2 r1 r2 / E(r2), evaluated without cancellation when r1 << r2.
double k11_minus_subtraction(RadialPoint point);

}  // namespace meff
