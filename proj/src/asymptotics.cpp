#include "meff/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace meff {

const char* model_name(RateModel m) {
    switch (m) {
    case RateModel::LOG: return "LOG";
    case RateModel::LOG2: return "LOG2";
    case RateModel::SQRT: return "SQRT";
    case RateModel::LAMBDA2: return "LAMBDA2";
    }
    return "?";
}

RateModel parse_model(const std::string& s) {
    for (RateModel m : all_models)
        if (s == model_name(m)) return m;
    throw Error(ErrorKind::invalid_argument, "unknown model '" + s + "' (LOG, LOG2, SQRT, LAMBDA2)");
}

double model_value(RateModel m, double L) {
    switch (m) {
    case RateModel::LOG: return std::log(L);
    case RateModel::LOG2: {
        const double l = std::log(L);
        return l * l;
    }
    case RateModel::SQRT: return std::sqrt(L);
    case RateModel::LAMBDA2: return L * L;
    }
    return 0.0;
}

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1)
        throw Error(ErrorKind::invalid_argument, "grid needs 0 < lo <= hi and per_decade >= 1");
    std::vector<double> out;
    const double decades = std::log10(hi / lo);
    const int n = static_cast<int>(std::floor(decades * per_decade + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    // Snap the last node onto hi so decade endpoints are exact.
    if (out.back() < hi * (1.0 - 1e-9))
        out.push_back(hi);
    else
        out.back() = hi;
    return out;
}

ScanSeries scan(const std::string& name, const Evaluator& eval, const CutoffConfig& base,
                const std::vector<double>& lambdas, int threads) {
    validate(base);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= base.kappa_over_m))
            throw Error(ErrorKind::invalid_argument, "scan cutoffs must be >= kappa_over_m");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw Error(ErrorKind::invalid_argument, "scan cutoffs must be strictly increasing");
    }
    ScanSeries s{name, std::vector<ScanPoint>(lambdas.size())};
    detail::parallel_for(lambdas.size(), threads, [&](std::size_t i) {
        CutoffConfig cfg = base;
        cfg.lambda_over_m = lambdas[i];
        ScanPoint p;
        p.lambda_over_m = lambdas[i];
        try {
            const IntegralResult r = eval(cfg);
            p.value = r.value;
            p.abs_err = r.abs_err;
        } catch (const ConvergenceError& e) {
            p.ok = false;
            p.value = e.best().value;
            p.abs_err = e.best().abs_err;
            p.error = e.what();
        }
        s.points[i] = p;
    });
    return s;
}

ScanSeries scan(const std::string& coefficient, const CutoffConfig& base, const std::vector<double>& lambdas,
                const CoefficientOptions& opt, int threads) {
    if (!is_coefficient_name(coefficient)) throw Error(ErrorKind::not_found, "unknown coefficient: " + coefficient);
    return scan(
        coefficient, [&](const CutoffConfig& cfg) { return compute_coefficient(coefficient, cfg, opt).result; },
        base, lambdas, threads);
}

namespace {

std::vector<const ScanPoint*> usable(const ScanSeries& s) {
    std::vector<const ScanPoint*> v;
    for (const auto& p : s.points)
        if (p.ok && std::isfinite(p.value)) v.push_back(&p);
    return v;
}

}  // namespace

Band plateau_band(const ScanSeries& series, RateModel model, double lambda_lo, double lambda_hi) {
    Band b{INFINITY, -INFINITY};
    for (const ScanPoint* p : usable(series)) {
        if (p->lambda_over_m < lambda_lo * (1 - 1e-12) || p->lambda_over_m > lambda_hi * (1 + 1e-12)) continue;
        const double mv = model_value(model, p->lambda_over_m);
        if (!(mv > 0.0)) continue;
        const double r = p->value / mv;
        b.lo = std::min(b.lo, r);
        b.hi = std::max(b.hi, r);
    }
    if (!(b.lo <= b.hi)) throw Error(ErrorKind::degenerate_fit, "no usable points in the plateau window");
    return b;
}

RateFit fit_rate(const ScanSeries& series, RateModel model) {
    const auto pts = usable(series);
    if (pts.size() < 3) throw Error(ErrorKind::degenerate_fit, "fit needs at least 3 valid points");
    const std::size_t n = pts.size();
    double mx = 0, my = 0;
    for (const ScanPoint* p : pts) {
        mx += model_value(model, p->lambda_over_m);
        my += p->value;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const ScanPoint* p : pts) {
        const double dx = model_value(model, p->lambda_over_m) - mx, dy = p->value - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::degenerate_fit, "degenerate design: all cutoffs equal");
    RateFit f{};
    f.model = model;
    f.coefficient = sxy / sxx;
    f.intercept = my - f.coefficient * mx;
    double ssr = 0;
    for (const ScanPoint* p : pts) {
        const double r = p->value - (f.intercept + f.coefficient * model_value(model, p->lambda_over_m));
        ssr += r * r;
    }
    // Residuals at rounding level count as an exact fit.
    const double scale = std::max(std::abs(my), 1e-300);
    f.residual = (syy > 1e-26 * scale * scale * n) ? std::sqrt(ssr / syy) : 0.0;
    const double top = pts.back()->lambda_over_m;
    const Band raw = plateau_band(series, model, top / 10.0, top);
    f.plateau_lo = raw.lo;
    f.plateau_hi = raw.hi;
    double clo = INFINITY, chi = -INFINITY;
    for (const ScanPoint* p : pts) {
        if (p->lambda_over_m < top / 10.0 * (1 - 1e-12)) continue;
        const double mv = model_value(model, p->lambda_over_m);
        if (!(mv > 0.0)) continue;
        const double r = (p->value - f.intercept) / mv;
        clo = std::min(clo, r);
        chi = std::max(chi, r);
    }
    f.corrected_lo = clo;
    f.corrected_hi = chi;
    return f;
}

std::vector<RateFit> model_select(const ScanSeries& series) {
    const auto pts = usable(series);
    if (pts.size() < 4) throw Error(ErrorKind::degenerate_fit, "model selection needs at least 4 valid points");
    if (pts.back()->lambda_over_m < 100.0 * pts.front()->lambda_over_m * (1 - 1e-12))
        throw Error(ErrorKind::degenerate_fit, "model selection needs a scan spanning two decades");
    std::vector<RateFit> fits;
    for (RateModel m : all_models) fits.push_back(fit_rate(series, m));
    // Stable sort keeps the slow-to-fast model order for residuals that agree to rounding.
    std::stable_sort(fits.begin(), fits.end(), [](const RateFit& a, const RateFit& b) {
        const double tol = 1e-9 * std::max({a.residual, b.residual, 1e-12});
        return a.residual < b.residual - tol;
    });
    return fits;
}

LimitBracket bracket_limit(const std::vector<double>& lambdas, const std::vector<double>& values, double rel_tol) {
    if (lambdas.size() != values.size() || lambdas.size() < 3)
        throw Error(ErrorKind::invalid_argument, "bracket_limit needs >= 3 matching points");
    auto band = [&](double lo, double hi) {
        Band b{INFINITY, -INFINITY};
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (lambdas[i] < lo * (1 - 1e-12) || lambdas[i] > hi * (1 + 1e-12)) continue;
            b.lo = std::min(b.lo, values[i]);
            b.hi = std::max(b.hi, values[i]);
        }
        return b;
    };
    const double top = lambdas.back();
    const Band cur = band(top / 10.0, top);
    const Band prev = band(top / 100.0, top / 10.0);
    const double mid = std::abs(cur.mid());
    LimitBracket out{false, cur.lo, cur.hi, mid > 0 ? cur.width() / mid : INFINITY};
    if (!std::isfinite(out.spread)) return out;
    const double prev_mid = std::abs(prev.mid());
    const double prev_spread = (prev.lo <= prev.hi && prev_mid > 0) ? prev.width() / prev_mid : INFINITY;
    out.plateau = out.spread < rel_tol && out.spread <= prev_spread;
    return out;
}

double power_exponent(const ScanSeries& series) {
    const auto pts = usable(series);
    if (pts.size() < 2) throw Error(ErrorKind::degenerate_fit, "exponent fit needs 2 points");
    double mx = 0, my = 0;
    for (const ScanPoint* p : pts) {
        mx += std::log(p->lambda_over_m);
        my += std::log(std::abs(p->value));
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0, sxy = 0;
    for (const ScanPoint* p : pts) {
        const double dx = std::log(p->lambda_over_m) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(std::abs(p->value)) - my);
    }
    if (!(sxx > 0)) throw Error(ErrorKind::degenerate_fit, "degenerate design");
    return sxy / sxx;
}

}  // namespace meff
