#include "meff/meff.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "meff/acceptance.hpp"
#include "meff/asymptotics.hpp"
#include "meff/catalog.hpp"
#include "meff/coefficients.hpp"
#include "meff/quadrature.hpp"

struct meff_context {
    meff::CutoffConfig cfg{1.0, 10.0, 3.0};
    meff::CoefficientOptions opt;
    int threads = 0;
};

struct meff_scan {
    meff::ScanSeries series;
    std::vector<int> methods;
};

struct meff_report {
    meff::AcceptanceReport rep;
};

namespace {

thread_local std::string g_last_error;

meff_status map_kind(meff::ErrorKind k) {
    switch (k) {
    case meff::ErrorKind::invalid_argument: return MEFF_E_INVALID_ARGUMENT;
    case meff::ErrorKind::unsupported_kernel: return MEFF_E_UNSUPPORTED;
    case meff::ErrorKind::domain: return MEFF_E_DOMAIN;
    case meff::ErrorKind::convergence: return MEFF_E_CONVERGENCE;
    case meff::ErrorKind::not_found: return MEFF_E_UNKNOWN_NAME;
    case meff::ErrorKind::degenerate_fit: return MEFF_E_FIT;
    }
    return MEFF_E_INTERNAL;
}

template <class F>
meff_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return MEFF_OK;
    } catch (const meff::Error& e) {
        g_last_error = e.what();
        return map_kind(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return MEFF_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MEFF_E_INTERNAL;
    }
}

meff_status null_arg(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return MEFF_E_INVALID_ARGUMENT;
}

int method_code(meff::Method m) {
    switch (m) {
    case meff::Method::closed_form: return MEFF_METHOD_CLOSED_FORM;
    case meff::Method::quadrature_1d: return MEFF_METHOD_QUADRATURE_1D;
    case meff::Method::quadrature_2d: return MEFF_METHOD_QUADRATURE_2D;
    case meff::Method::monte_carlo: return MEFF_METHOD_MONTE_CARLO;
    }
    return -1;
}

int method_of(const std::string& name) {
    static const char* closed[] = {"e2", "ea", "eb", "c1", "a1", "a1_spinless"};
    for (const char* c : closed)
        if (name == c) return MEFF_METHOD_CLOSED_FORM;
    return MEFF_METHOD_QUADRATURE_2D;
}

bool model_ok(int m) { return m >= MEFF_MODEL_LOG && m <= MEFF_MODEL_LAMBDA2; }

meff_rate_fit to_c(const meff::RateFit& f) {
    return {static_cast<int>(f.model), f.coefficient, f.intercept, f.residual, f.plateau_lo, f.plateau_hi,
            f.corrected_lo, f.corrected_hi};
}

}  // namespace

extern "C" {

const char* meff_status_string(meff_status s) {
    switch (s) {
    case MEFF_OK: return "ok";
    case MEFF_E_INVALID_ARGUMENT: return "invalid argument";
    case MEFF_E_UNKNOWN_NAME: return "unknown name";
    case MEFF_E_UNSUPPORTED: return "unsupported";
    case MEFF_E_DOMAIN: return "domain error";
    case MEFF_E_CONVERGENCE: return "convergence failure";
    case MEFF_E_FIT: return "fit error";
    case MEFF_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* meff_last_error(void) { return g_last_error.c_str(); }

meff_status meff_context_create(meff_context** out) {
    if (!out) return null_arg("out");
    return guarded([&] { *out = new meff_context(); });
}

void meff_context_destroy(meff_context* ctx) { delete ctx; }

meff_status meff_set_cutoffs(meff_context* ctx, double kappa_over_m, double lambda_over_m) {
    if (!ctx) return null_arg("ctx");
    return guarded([&] {
        meff::CutoffConfig c = ctx->cfg;
        c.kappa_over_m = kappa_over_m;
        c.lambda_over_m = lambda_over_m;
        meff::validate(c);
        ctx->cfg = c;
    });
}

meff_status meff_set_lam_split(meff_context* ctx, double lam_split) {
    if (!ctx) return null_arg("ctx");
    return guarded([&] {
        meff::CutoffConfig c = ctx->cfg;
        c.lam_split = lam_split;
        meff::validate(c);
        ctx->cfg = c;
    });
}

meff_status meff_set_rel_tol(meff_context* ctx, double rel_tol_2d) {
    if (!ctx) return null_arg("ctx");
    if (!(rel_tol_2d >= 1e-14 && rel_tol_2d <= 1e-2)) {
        g_last_error = "rel_tol must lie in [1e-14, 1e-2]";
        return MEFF_E_INVALID_ARGUMENT;
    }
    ctx->opt.rel_tol_2d = rel_tol_2d;
    return MEFF_OK;
}

meff_status meff_set_max_evals(meff_context* ctx, long long max_evals) {
    if (!ctx) return null_arg("ctx");
    if (max_evals < 225) {
        g_last_error = "max_evals must be at least 225";
        return MEFF_E_INVALID_ARGUMENT;
    }
    ctx->opt.max_evals = max_evals;
    return MEFF_OK;
}

meff_status meff_set_bound_form(meff_context* ctx, int enabled) {
    if (!ctx) return null_arg("ctx");
    ctx->opt.bound_form = enabled != 0;
    return MEFF_OK;
}

meff_status meff_set_threads(meff_context* ctx, int threads) {
    if (!ctx) return null_arg("ctx");
    if (threads < 0) {
        g_last_error = "threads must be >= 0";
        return MEFF_E_INVALID_ARGUMENT;
    }
    ctx->threads = threads;
    return MEFF_OK;
}

const char* meff_method_name(int method) {
    switch (method) {
    case MEFF_METHOD_CLOSED_FORM: return meff::method_name(meff::Method::closed_form);
    case MEFF_METHOD_QUADRATURE_1D: return meff::method_name(meff::Method::quadrature_1d);
    case MEFF_METHOD_QUADRATURE_2D: return meff::method_name(meff::Method::quadrature_2d);
    case MEFF_METHOD_MONTE_CARLO: return meff::method_name(meff::Method::monte_carlo);
    }
    return "unknown";
}

size_t meff_coefficient_count(void) { return meff::coefficient_names().size(); }

const char* meff_coefficient_name(size_t i) {
    const auto& n = meff::coefficient_names();
    return i < n.size() ? n[i].c_str() : nullptr;
}

meff_status meff_compute(const meff_context* ctx, const char* name, meff_result* out) {
    if (!ctx) return null_arg("ctx");
    if (!name) return null_arg("name");
    if (!out) return null_arg("out");
    *out = {NAN, NAN, 0, method_of(name)};
    return guarded([&] {
        try {
            const meff::CoefficientReport r = meff::compute_coefficient(name, ctx->cfg, ctx->opt);
            *out = {r.result.value, r.result.abs_err, static_cast<long long>(r.result.n_eval), method_code(r.method)};
        } catch (const meff::ConvergenceError& e) {
            *out = {e.best().value, e.best().abs_err, static_cast<long long>(e.best().n_eval), method_of(name)};
            throw;
        }
    });
}

meff_status meff_series(const meff_context* ctx, meff_series_coeffs* out) {
    if (!ctx) return null_arg("ctx");
    if (!out) return null_arg("out");
    return guarded([&] {
        const meff::SeriesCoefficients s = meff::meff_series(ctx->cfg, ctx->opt);
        *out = {s.a1, s.a2_dominant, s.c1, s.c2_dominant, s.e2};
    });
}

meff_status meff_ratio(const meff_context* ctx, double e, double* out) {
    if (!ctx) return null_arg("ctx");
    if (!out) return null_arg("out");
    return guarded([&] { *out = meff::meff_ratio(e, ctx->cfg, ctx->opt); });
}

meff_status meff_lambda_grid(double lo, double hi, int per_decade, double* out, size_t cap, size_t* n) {
    if (!n) return null_arg("n");
    return guarded([&] {
        const auto g = meff::geometric_grid(lo, hi, per_decade);
        *n = g.size();
        if (g.size() > cap || (!out && !g.empty()))
            throw meff::Error(meff::ErrorKind::invalid_argument, "grid buffer too small");
        for (size_t i = 0; i < g.size(); ++i) out[i] = g[i];
    });
}

meff_status meff_scan_run(const meff_context* ctx, const char* name, const double* lambdas, size_t n, meff_scan** out) {
    if (!ctx) return null_arg("ctx");
    if (!name) return null_arg("name");
    if (!out) return null_arg("out");
    if (!lambdas && n > 0) return null_arg("lambdas");
    *out = nullptr;
    return guarded([&] {
        auto s = std::make_unique<meff_scan>();
        s->series = meff::scan(name, ctx->cfg, std::vector<double>(lambdas, lambdas + n), ctx->opt, ctx->threads);
        s->methods.assign(n, method_of(name));
        *out = s.release();
    });
}

size_t meff_scan_size(const meff_scan* s) { return s ? s->series.points.size() : 0; }

meff_status meff_scan_point(const meff_scan* s, size_t i, double* lambda_over_m, meff_result* r, int* ok) {
    if (!s) return null_arg("scan");
    if (i >= s->series.points.size()) {
        g_last_error = "scan index out of range";
        return MEFF_E_INVALID_ARGUMENT;
    }
    const meff::ScanPoint& p = s->series.points[i];
    if (lambda_over_m) *lambda_over_m = p.lambda_over_m;
    if (r) *r = {p.value, p.abs_err, 0, s->methods[i]};
    if (ok) *ok = p.ok ? 1 : 0;
    return MEFF_OK;
}

void meff_scan_destroy(meff_scan* s) { delete s; }

meff_status meff_fit_rate(const meff_scan* s, int model, meff_rate_fit* out) {
    if (!s) return null_arg("scan");
    if (!out) return null_arg("out");
    if (!model_ok(model)) {
        g_last_error = "unknown model";
        return MEFF_E_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = to_c(meff::fit_rate(s->series, static_cast<meff::RateModel>(model))); });
}

meff_status meff_model_select(const meff_scan* s, meff_rate_fit out[4]) {
    if (!s) return null_arg("scan");
    if (!out) return null_arg("out");
    return guarded([&] {
        const auto fits = meff::model_select(s->series);
        for (size_t i = 0; i < 4; ++i) out[i] = to_c(fits[i]);
    });
}

const char* meff_model_name(int model) {
    return model_ok(model) ? meff::model_name(static_cast<meff::RateModel>(model)) : "unknown";
}

meff_status meff_model_parse(const char* name, int* model) {
    if (!name) return null_arg("name");
    if (!model) return null_arg("model");
    return guarded([&] { *model = static_cast<int>(meff::parse_model(name)); });
}

size_t meff_catalog_size(void) { return meff::list_terms().size(); }

meff_status meff_catalog_term(size_t i, meff_term* out) {
    if (!out) return null_arg("out");
    const auto& t = meff::list_terms();
    if (i >= t.size()) {
        g_last_error = "catalog index out of range";
        return MEFF_E_INVALID_ARGUMENT;
    }
    const meff::TermDescriptor& d = t[i];
    *out = {d.table,    d.row,         d.phi_left,
            d.h_mid,    d.phi_right,   d.sigmaB_count,
            d.pf_count, d.h0inv_count, static_cast<int>(d.predicted_order),
            meff::order_name(d.predicted_order), d.printed_order, d.note};
    return MEFF_OK;
}

meff_status meff_predicted_order(int l, int m, int n, int* order) {
    if (!order) return null_arg("order");
    return guarded([&] { *order = static_cast<int>(meff::predicted_order(l, m, n)); });
}

const char* meff_order_name(int order) {
    if (order < 0 || order > static_cast<int>(meff::Order::neg_lambda2)) return "unknown";
    return meff::order_name(static_cast<meff::Order>(order));
}

meff_status meff_oracle_run(const meff_context* ctx, unsigned long long seed, long long samples,
                            meff_oracle_row* rows, size_t cap, size_t* n) {
    if (!ctx) return null_arg("ctx");
    if (!n) return null_arg("n");
    *n = 4;
    if (!rows || cap < 4) {
        g_last_error = "oracle needs room for 4 rows";
        return MEFF_E_INVALID_ARGUMENT;
    }
    return guarded([&] {
        struct Item {
            meff::Raw6d raw;
            int reduced;  // 0: E0, 1: E3, 2: none, 3: E4
        };
        const Item items[4] = {{meff::Raw6d::E0, 0}, {meff::Raw6d::E3, 1}, {meff::Raw6d::E3_sigma_term, 2},
                               {meff::Raw6d::E4, 3}};
        for (size_t i = 0; i < 4; ++i) {
            const meff::IntegralResult mc = meff::mc_integrate_6d(meff::raw_integrand(items[i].raw), ctx->cfg, samples,
                                                                  seed + i, ctx->threads);
            meff::IntegralResult red{0.0, 0.0, 0};
            if (items[i].reduced == 0) red = meff::E0_coeff(ctx->cfg, ctx->opt);
            if (items[i].reduced == 1) red = meff::E3_coeff(ctx->cfg, ctx->opt);
            if (items[i].reduced == 3) red = meff::E4_coeff(ctx->cfg, ctx->opt);
            const double s = std::hypot(mc.abs_err, red.abs_err);
            rows[i] = {meff::raw_name(items[i].raw), mc.value, mc.abs_err, red.value, red.abs_err,
                       s > 0 ? (mc.value - red.value) / s : 0.0};
        }
    });
}

void meff_report_options_default(meff_report_options* opt) {
    if (!opt) return;
    const meff::AcceptanceOptions d;
    *opt = {d.kappa_over_m, d.lambda_cap, d.rel_tol_2d, static_cast<long long>(d.mc_samples),
            static_cast<unsigned long long>(d.seed), d.threads, d.enforce_budgets ? 1 : 0};
}

meff_status meff_report_run(const meff_report_options* opt, meff_report** out) {
    if (!opt) return null_arg("opt");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        meff::AcceptanceOptions o;
        o.kappa_over_m = opt->kappa_over_m;
        o.lambda_cap = opt->lambda_cap;
        o.rel_tol_2d = opt->rel_tol_2d;
        o.mc_samples = opt->mc_samples;
        o.seed = opt->seed;
        o.threads = opt->threads;
        o.enforce_budgets = opt->enforce_budgets != 0;
        auto r = std::make_unique<meff_report>();
        r->rep = meff::run_acceptance(o);
        *out = r.release();
    });
}

size_t meff_report_size(const meff_report* r) { return r ? r->rep.criteria.size() : 0; }

meff_status meff_report_criterion(const meff_report* r, size_t i, meff_criterion* out) {
    if (!r) return null_arg("report");
    if (!out) return null_arg("out");
    if (i >= r->rep.criteria.size()) {
        g_last_error = "criterion index out of range";
        return MEFF_E_INVALID_ARGUMENT;
    }
    const meff::CriterionResult& c = r->rep.criteria[i];
    int st = MEFF_CRITERION_FAIL;
    if (c.status == meff::CriterionStatus::pass) st = MEFF_CRITERION_PASS;
    if (c.status == meff::CriterionStatus::skipped) st = MEFF_CRITERION_SKIPPED;
    *out = {c.id.c_str(), c.title.c_str(), st, c.detail.c_str(), c.seconds, c.budget_seconds};
    return MEFF_OK;
}

const char* meff_report_narrative(const meff_report* r) { return r ? r->rep.narrative.c_str() : ""; }

int meff_report_all_passed(const meff_report* r) { return r && r->rep.all_passed() ? 1 : 0; }

void meff_report_destroy(meff_report* r) { delete r; }

}  // extern "C"
