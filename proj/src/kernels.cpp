#include "meff/kernels.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <mutex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "meff/error.hpp"

namespace meff {

namespace {

constexpr std::array<KernelId, 9> kIds{{
    {KernelFamily::K1, 1},
    {KernelFamily::K1, 2},
    {KernelFamily::K1, 3},
    {KernelFamily::K2, 1},
    {KernelFamily::K2, 2},
    {KernelFamily::K2, 3},
    {KernelFamily::Khat1, 1},
    {KernelFamily::Khat1, 2},
    {KernelFamily::Khat2, 3},
}};

void require_supported(const KernelRequest& req) {
    if (!kernel_supported(req.family, req.p))
        throw Error(ErrorKind::unsupported_kernel,
                    std::string("unsupported kernel ") + kernel_name(req.family) + ",p=" +
                        std::to_string(req.p));
}

void require_point(RadialPoint pt) {
    if (!(pt.r1 > 0.0) || !(pt.r2 > 0.0) || !std::isfinite(pt.r1) || !std::isfinite(pt.r2))
        throw Error(ErrorKind::invalid_argument, "radial point must have r1 > 0 and r2 > 0");
}

// Series data: value = pref * sum_j a_j zeta^(e0 + 2j).
struct SeriesShape {
    double pref;
    int e0;
    double (*coef)(int j);
};

SeriesShape series_shape(KernelFamily f, int p, double R) {
    const double R2 = R * R;
    switch (f) {
    case KernelFamily::K1:
        if (p == 1) return {1.0, 1, [](int j) { return 2.0 / (2 * j + 1); }};
        if (p == 2) return {2.0 / R, 1, [](int) { return 1.0; }};
        return {1.0 / R2, 1, [](int j) { return 2.0 * j + 2.0; }};
    case KernelFamily::K2:
        // K2,1 regrouped: the n=0,1 head and the (1 - zeta^-2) tail collapse to 1/(4k^2-1).
        if (p == 1)
            return {4.0, 1, [](int j) {
                        const double k = j + 1;
                        return 1.0 / (4.0 * k * k - 1.0);
                    }};
        if (p == 2) return {4.0 / R, 1, [](int j) { return 1.0 / (2 * j + 3); }};
        return {2.0 / R2, 1, [](int j) { return 1.0 - 1.0 / (2 * j + 3); }};
    case KernelFamily::Khat1:
        if (p == 1) return {-2.0, 2, [](int j) { return 1.0 / (2 * j + 3); }};
        return {-2.0 / R, 2, [](int j) { return 1.0 - 1.0 / (2 * j + 3); }};
    case KernelFamily::Khat2:
        return {-2.0 / R2, 2, [](int j) { return 1.0 - 3.0 / (2 * j + 5); }};
    }
    return {0.0, 0, nullptr};
}

// Partial sum with n_max terms; when tol > 0 stops early once terms drop below tol*|sum|.
SeriesValue series_sum(const KernelRequest& req, int n_max, double tol) {
    const EnergyDenoms d = energy_denoms(req.point);
    const double z = d.zeta;
    const double z2 = z * z;
    const SeriesShape s = series_shape(req.family, req.p, d.calR);
    double pw = std::pow(z, s.e0);
    double sum = 0.0;
    int j = 0;
    for (; j < n_max; ++j) {
        const double t = s.coef(j) * pw;
        sum += t;
        pw *= z2;
        if (tol > 0.0 && std::abs(t) <= tol * std::abs(sum)) {
            ++j;
            break;
        }
    }
    const double a_n = s.coef(j);
    const double q = std::max(s.coef(j + 1) / a_n, 1.0) * z2;
    const double tail = std::abs(s.pref) * a_n * pw / (1.0 - q);
    return {s.pref * sum, tail};
}

}  // namespace

EnergyDenoms energy_denoms(RadialPoint pt) {
    const double r1 = pt.r1, r2 = pt.r2;
    EnergyDenoms d{};
    d.calE1 = calE(r1);
    d.calE2 = calE(r2);
    d.rho = r1 * r2;
    d.calR = 0.5 * (r1 * r1 + r2 * r2) + r1 + r2;
    const double diff = r1 - r2;
    d.eMinus = 0.5 * diff * diff + r1 + r2;
    const double sum = r1 + r2;
    d.ePlus = 0.5 * sum * sum + r1 + r2;
    d.zeta = d.rho / d.calR;
    return d;
}

bool kernel_supported(KernelFamily family, int p) {
    for (const auto& id : kIds)
        if (id.family == family && id.p == p) return true;
    return false;
}

const std::array<KernelId, 9>& kernel_ids() { return kIds; }

const char* kernel_name(KernelFamily family) {
    switch (family) {
    case KernelFamily::K1: return "K1";
    case KernelFamily::K2: return "K2";
    case KernelFamily::Khat1: return "Khat1";
    case KernelFamily::Khat2: return "Khat2";
    }
    return "?";
}

double log_ratio(const EnergyDenoms& d) { return std::log1p(2.0 * d.rho / d.eMinus); }

double kernel_closed(const KernelRequest& req) {
    require_supported(req);
    require_point(req.point);
    // Extended precision: the Khat2,3 form cancels to ~zeta^4 of its leading terms.
    using LD = long double;
    const LD r1 = req.point.r1, r2 = req.point.r2;
    const LD rho = r1 * r2;
    const LD R = (r1 * r1 + r2 * r2) / 2 + r1 + r2;
    const LD Em = (r1 - r2) * (r1 - r2) / 2 + r1 + r2;
    const LD Ep = (r1 + r2) * (r1 + r2) / 2 + r1 + r2;
    const LD L = std::log1p(2 * rho / Em);
    const int p = req.p;
    LD v = 0;
    switch (req.family) {
    case KernelFamily::K1:
        if (p == 1)
            v = L;
        else
            v = (std::pow(Em, LD(1 - p)) - std::pow(Ep, LD(1 - p))) / (p - 1);
        break;
    case KernelFamily::K2:
        if (p == 1)
            v = (-Ep * Em * L + 2 * R * rho) / (rho * rho);
        else if (p == 2)
            v = (2 * R * L - 4 * rho) / (rho * rho);
        else
            v = (2 * R * rho / (Ep * Em) - L) / (rho * rho);
        break;
    case KernelFamily::Khat1:
        if (p == 1)
            v = (2 * rho - R * L) / rho;
        else
            v = (L - R * (1 / Em - 1 / Ep)) / rho;
        break;
    case KernelFamily::Khat2:
        v = (3 * R * L - 6 * rho - 2 * rho * rho * rho / (Ep * Em)) / (rho * rho * rho);
        break;
    }
    return static_cast<double>(v);
}

SeriesValue kernel_series_bounded(const KernelRequest& req, int n_max) {
    require_supported(req);
    require_point(req.point);
    if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be >= 1");
    if (!(energy_denoms(req.point).zeta < 1.0))
        throw Error(ErrorKind::domain, "series requires zeta < 1");
    return series_sum(req, n_max, 0.0);
}

double kernel_series(const KernelRequest& req, int n_max) {
    return kernel_series_bounded(req, n_max).value;
}

double kernel_eval(const KernelRequest& req) {
    require_supported(req);
    require_point(req.point);
    if (energy_denoms(req.point).zeta < zeta_switch) return series_sum(req, 60, 1e-18).value;
    return kernel_closed(req);
}

namespace {

struct GLRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

const GLRule& gl_rule(int n) {
    static std::mutex mu;
    static std::map<int, GLRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GLRule rule;
    for (double z : boost::math::legendre_p_zeros<double>(n)) {
        const double dp = boost::math::legendre_p_prime(n, z);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.x.push_back(z);
        rule.w.push_back(w);
        if (z != 0.0) {
            rule.x.push_back(-z);
            rule.w.push_back(w);
        }
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

double angular_oracle(const KernelRequest& req, int n_nodes) {
    require_supported(req);
    require_point(req.point);
    if (n_nodes < 16) throw Error(ErrorKind::invalid_argument, "angular_oracle needs >= 16 nodes");
    const EnergyDenoms d = energy_denoms(req.point);
    const double R = d.calR, rho = d.rho;
    auto integrand = [&](double th) {
        const double c = std::cos(th);
        const double den = std::pow(R + rho * c, req.p);
        double num = 1.0;
        switch (req.family) {
        case KernelFamily::K1: num = 1.0; break;
        case KernelFamily::K2: num = 1.0 - c * c; break;
        case KernelFamily::Khat1: num = c; break;
        case KernelFamily::Khat2: num = (1.0 - c * c) * c; break;
        }
        return rho * std::sin(th) * num / den;
    };
    // Composite rule: panels graded geometrically toward theta = pi, where the
    // integrand sharpens as zeta -> 1. Panels of 32 nodes each.
    const int panels = std::max(1, n_nodes / 32);
    const int per = n_nodes / panels;
    const GLRule& rule = gl_rule(per);
    const double pi = std::numbers::pi;
    std::vector<double> edges{0.0};
    for (int k = 1; k < panels; ++k) edges.push_back(pi - pi * std::ldexp(1.0, -k));
    edges.push_back(pi);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = edges[k], b = edges[k + 1];
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * integrand(m + h * rule.x[i]);
        total += h * s;
    }
    return total;
}

double k11_minus_subtraction(RadialPoint pt) {
    require_point(pt);
    const EnergyDenoms d = energy_denoms(pt);
    const double z = d.zeta;
    // K1,1 - 2 rho/E2 = 2 (atanh z - z) - 2 rho E1 / (R E2), using R = E1 + E2.
    double atanh_minus;
    if (z < 0.1) {
        const double z2 = z * z;
        double pw = z * z2, s = 0.0;
        for (int n = 1; n < 40; ++n) {
            const double t = pw / (2 * n + 1);
            s += t;
            if (t <= 1e-18 * s) break;
            pw *= z2;
        }
        atanh_minus = s;
    } else {
        using LD = long double;
        const LD r1 = pt.r1, r2 = pt.r2;
        const LD Em = (r1 - r2) * (r1 - r2) / 2 + r1 + r2;
        const LD R = (r1 * r1 + r2 * r2) / 2 + r1 + r2;
        atanh_minus = static_cast<double>(std::log1p(2 * r1 * r2 / Em) / 2 - r1 * r2 / R);
    }
    return 2.0 * atanh_minus - 2.0 * d.rho * d.calE1 / (d.calR * d.calE2);
}

}  // namespace meff
