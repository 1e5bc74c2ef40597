// Command-line front end over the C API: compute, scan, fit, catalog, report, oracle.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meff/meff.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriteria = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Settings {
    double kappa = 1.0;
    std::optional<double> lambda;
    std::string grid = "10:1000:5";
    std::optional<double> rel_tol;
    long long mc_samples = 1000000;
    std::optional<unsigned long long> seed;
    std::string out;
    std::vector<std::string> coeffs;
    std::string model;
    double lam_split = 3.0;
    std::optional<long long> max_evals;
    bool bound_form = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

// Owns the C context; the status of every setter is checked.
struct Context {
    meff_context* ctx = nullptr;
    Context() {
        if (meff_context_create(&ctx) != MEFF_OK) throw std::runtime_error(meff_last_error());
    }
    ~Context() { meff_context_destroy(ctx); }
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;
};

void usage_check(meff_status st) {
    if (st != MEFF_OK) throw UsageError(meff_last_error());
}

void configure(Context& c, const Settings& s, double lambda) {
    usage_check(meff_set_cutoffs(c.ctx, s.kappa, lambda));
    usage_check(meff_set_lam_split(c.ctx, s.lam_split));
    if (s.rel_tol) usage_check(meff_set_rel_tol(c.ctx, *s.rel_tol));
    if (s.max_evals) usage_check(meff_set_max_evals(c.ctx, *s.max_evals));
    usage_check(meff_set_bound_form(c.ctx, s.bound_form ? 1 : 0));
}

std::vector<double> parse_grid(const std::string& text) {
    double lo = 0, hi = 0;
    int per = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> per) || c1 != ':' || c2 != ':' || !in.eof())
        throw UsageError("--lambda-grid expects lo:hi:per_decade, got '" + text + "'");
    size_t n = 0;
    meff_lambda_grid(lo, hi, per, nullptr, 0, &n);
    if (n == 0) throw UsageError(std::string("bad --lambda-grid: ") + meff_last_error());
    std::vector<double> g(n);
    usage_check(meff_lambda_grid(lo, hi, per, g.data(), g.size(), &n));
    return g;
}

bool known_coefficient(const std::string& name) {
    for (size_t i = 0; i < meff_coefficient_count(); ++i)
        if (name == meff_coefficient_name(i)) return true;
    return false;
}

int cmd_compute(const Settings& s, std::ostream& out) {
    std::vector<std::string> names = s.coeffs;
    if (names.empty())
        for (size_t i = 0; i < meff_coefficient_count(); ++i) names.emplace_back(meff_coefficient_name(i));
    for (const auto& n : names)
        if (!known_coefficient(n)) throw UsageError("unknown coefficient '" + n + "'");
    const double lambda = s.lambda.value_or(10.0);
    Context c;
    configure(c, s, lambda);
    int rc = kExitOk;
    out << "name,kappa_over_m,lambda_over_m,value,abs_err,method\n";
    for (const auto& n : names) {
        meff_result r{};
        const meff_status st = meff_compute(c.ctx, n.c_str(), &r);
        std::string method = meff_method_name(r.method);
        if (st != MEFF_OK) {
            std::cerr << "meff: " << n << ": " << meff_last_error() << "\n";
            if (st == MEFF_E_INVALID_ARGUMENT || st == MEFF_E_UNKNOWN_NAME) throw UsageError(meff_last_error());
            rc = kExitNumerical;
            method += "(unconverged)";
        }
        out << n << ',' << num(s.kappa) << ',' << num(lambda) << ',' << num(r.value) << ',' << num(r.abs_err) << ','
            << method << '\n';
    }
    return rc;
}

struct ScanHandle {
    meff_scan* scan = nullptr;
    ~ScanHandle() { meff_scan_destroy(scan); }
};

int run_scan(const Settings& s, std::ostream& out, ScanHandle& h) {
    if (s.coeffs.size() != 1) throw UsageError("scan and fit take exactly one --coeff");
    if (!known_coefficient(s.coeffs[0])) throw UsageError("unknown coefficient '" + s.coeffs[0] + "'");
    const std::vector<double> grid = parse_grid(s.grid);
    Context c;
    configure(c, s, grid.back());
    const meff_status st = meff_scan_run(c.ctx, s.coeffs[0].c_str(), grid.data(), grid.size(), &h.scan);
    if (st == MEFF_E_INVALID_ARGUMENT || st == MEFF_E_UNKNOWN_NAME) throw UsageError(meff_last_error());
    if (st != MEFF_OK) {
        std::cerr << "meff: " << meff_last_error() << "\n";
        return kExitNumerical;
    }
    int rc = kExitOk;
    out << "lambda_over_m,value,abs_err\n";
    for (size_t i = 0; i < meff_scan_size(h.scan); ++i) {
        double L = 0;
        meff_result r{};
        int ok = 1;
        meff_scan_point(h.scan, i, &L, &r, &ok);
        out << num(L) << ',' << num(r.value) << ',' << num(r.abs_err) << '\n';
        if (!ok) {
            std::cerr << "meff: point " << num(L) << " did not converge; best estimate written\n";
            rc = kExitNumerical;
        }
    }
    return rc;
}

int cmd_scan(const Settings& s, std::ostream& out) {
    ScanHandle h;
    return run_scan(s, out, h);
}

int cmd_fit(const Settings& s, std::ostream& out) {
    std::optional<int> model;
    if (!s.model.empty()) {
        int m = 0;
        usage_check(meff_model_parse(s.model.c_str(), &m));
        model = m;
    }
    ScanHandle h;
    const int rc = run_scan(s, out, h);
    if (!h.scan) return rc;
    std::vector<meff_rate_fit> fits;
    if (model) {
        meff_rate_fit f{};
        const meff_status st = meff_fit_rate(h.scan, *model, &f);
        if (st != MEFF_OK) throw UsageError(meff_last_error());
        fits.push_back(f);
    } else {
        meff_rate_fit f[4];
        const meff_status st = meff_model_select(h.scan, f);
        if (st != MEFF_OK) throw UsageError(meff_last_error());
        fits.assign(f, f + 4);
    }
    out << "\nmodel,coefficient,residual,plateau_lo,plateau_hi\n";
    for (const auto& f : fits)
        out << meff_model_name(f.model) << ',' << num(f.coefficient) << ',' << num(f.residual) << ','
            << num(f.plateau_lo) << ',' << num(f.plateau_hi) << '\n';
    return rc;
}

int cmd_catalog(std::ostream& out) {
    out << "table,row,phi_left,h_mid,phi_right,sigmaB,pf,h0inv,order,printed_order,note\n";
    for (size_t i = 0; i < meff_catalog_size(); ++i) {
        meff_term t{};
        meff_catalog_term(i, &t);
        out << t.table << ',' << t.row << ',' << t.phi_left << ',' << t.h_mid << ',' << t.phi_right << ','
            << t.sigmab << ',' << t.pf << ',' << t.h0inv << ',' << t.order_name << ',' << t.printed_order << ','
            << csv_field(t.note) << '\n';
    }
    return kExitOk;
}

int cmd_report(const Settings& s, std::ostream& out) {
    meff_report_options o;
    meff_report_options_default(&o);
    o.kappa_over_m = s.kappa;
    if (s.lambda) {
        if (!(*s.lambda >= s.kappa)) throw UsageError("--lambda-over-m must be >= --kappa-over-m");
        o.lambda_cap = *s.lambda;
    }
    if (s.rel_tol) {
        if (!(*s.rel_tol >= 1e-14 && *s.rel_tol <= 1e-2)) throw UsageError("--rel-tol must lie in [1e-14, 1e-2]");
        o.rel_tol_2d = *s.rel_tol;
    }
    if (s.mc_samples < 10000) throw UsageError("--mc-samples must be >= 10000");
    o.mc_samples = s.mc_samples;
    if (s.seed) o.seed = *s.seed;
    meff_report* rep = nullptr;
    const meff_status st = meff_report_run(&o, &rep);
    if (st == MEFF_E_INVALID_ARGUMENT) throw UsageError(meff_last_error());
    if (st != MEFF_OK) {
        std::cerr << "meff: " << meff_last_error() << "\n";
        return kExitNumerical;
    }
    std::unique_ptr<meff_report, void (*)(meff_report*)> guard(rep, meff_report_destroy);
    const char* names[] = {"PASS", "FAIL", "SKIPPED"};
    out << "acceptance report (kappa/m = " << num(o.kappa_over_m) << ", rel_tol = " << num(o.rel_tol_2d)
        << ", mc samples = " << o.mc_samples << ", seed = " << o.seed << ")\n";
    for (size_t i = 0; i < meff_report_size(rep); ++i) {
        meff_criterion c{};
        meff_report_criterion(rep, i, &c);
        char head[160];
        std::snprintf(head, sizeof head, "%-7s %-3s %-48s %8.2fs / %4.0fs  ", names[c.status], c.id, c.title,
                      c.seconds, c.budget_seconds);
        out << head << c.detail << '\n';
    }
    out << '\n' << meff_report_narrative(rep);
    out << "limit constants are reported as plateau bands only; no point estimates are implied\n";
    return meff_report_all_passed(rep) ? kExitOk : kExitCriteria;
}

int cmd_oracle(const Settings& s, std::ostream& out) {
    if (!s.seed) throw UsageError("oracle requires --seed");
    if (s.mc_samples < 10000) throw UsageError("--mc-samples must be >= 10000");
    const double lambda = s.lambda.value_or(10.0);
    Context c;
    configure(c, s, lambda);
    meff_oracle_row rows[4];
    size_t n = 0;
    const meff_status st = meff_oracle_run(c.ctx, *s.seed, s.mc_samples, rows, 4, &n);
    if (st == MEFF_E_INVALID_ARGUMENT) throw UsageError(meff_last_error());
    if (st != MEFF_OK) {
        std::cerr << "meff: " << meff_last_error() << "\n";
        return kExitNumerical;
    }
    out << "name,kappa_over_m,lambda_over_m,samples,mc_value,mc_stderr,reduced_value,reduced_err,z_score\n";
    for (size_t i = 0; i < n; ++i)
        out << rows[i].name << ',' << num(s.kappa) << ',' << num(lambda) << ',' << s.mc_samples << ','
            << num(rows[i].mc_value) << ',' << num(rows[i].mc_stderr) << ',' << num(rows[i].reduced_value) << ','
            << num(rows[i].reduced_err) << ',' << num(rows[i].z_score) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective-mass coefficients, cutoff scans and divergence-rate checks"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    double lambda = 0;
    double rel_tol = 0;
    unsigned long long seed = 0;
    long long max_evals = 0;
    app.set_config("--config", "", "Plain key=value file; flags given on the command line take precedence");
    app.add_option("--kappa-over-m", s.kappa, "Infrared cutoff kappa/m")->check(CLI::PositiveNumber);
    auto* lam_opt = app.add_option("--lambda-over-m", lambda, "Ultraviolet cutoff Lambda/m (report: scan cap)");
    app.add_option("--lambda-grid", s.grid, "Scan grid lo:hi:per_decade");
    auto* tol_opt = app.add_option("--rel-tol", rel_tol, "Relative tolerance for 2D quadrature");
    app.add_option("--mc-samples", s.mc_samples, "Monte Carlo sample count");
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--out", s.out, "Output path (default stdout)");
    app.add_option("--coeff", s.coeffs, "Coefficient names, comma separated")->delimiter(',');
    app.add_option("--model", s.model, "LOG, LOG2, SQRT or LAMBDA2");
    app.add_option("--lam-split", s.lam_split, "Region split ratio (>= 3)");
    auto* evals_opt = app.add_option("--max-evals", max_evals, "Evaluation budget per 2D integral");
    app.add_flag("--bound-form", s.bound_form, "Use the upper-bound integrands for E0 and E3");

    auto* compute = app.add_subcommand("compute", "Evaluate coefficients at one cutoff");
    auto* scan = app.add_subcommand("scan", "Evaluate one coefficient over a cutoff grid");
    auto* fit = app.add_subcommand("fit", "Scan and fit divergence-rate models");
    auto* catalog = app.add_subcommand("catalog", "Dump the fourth-order term classification");
    auto* report = app.add_subcommand("report", "Run the acceptance checks and print a pass/fail table");
    auto* oracle = app.add_subcommand("oracle", "Monte Carlo cross-check of the reduced integrals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (lam_opt->count() > 0) s.lambda = lambda;
    if (tol_opt->count() > 0) s.rel_tol = rel_tol;
    if (seed_opt->count() > 0) s.seed = seed;
    if (evals_opt->count() > 0) s.max_evals = max_evals;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!s.out.empty()) {
        file.open(s.out, std::ios::out | std::ios::trunc);
        if (!file) {
            std::cerr << "meff: cannot open " << s.out << "\n";
            return kExitUsage;
        }
        out = &file;
    }
    try {
        if (compute->parsed()) return cmd_compute(s, *out);
        if (scan->parsed()) return cmd_scan(s, *out);
        if (fit->parsed()) return cmd_fit(s, *out);
        if (catalog->parsed()) return cmd_catalog(*out);
        if (report->parsed()) return cmd_report(s, *out);
        if (oracle->parsed()) return cmd_oracle(s, *out);
    } catch (const UsageError& e) {
        std::cerr << "meff: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "meff: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
