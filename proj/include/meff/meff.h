/* C interface to the effective-mass coefficient library.
 *
 * Every function returns a meff_status; on failure meff_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the caller. */
#ifndef MEFF_MEFF_H
#define MEFF_MEFF_H

#include <stddef.h>

#if defined(MEFF_BUILDING_LIBRARY)
#define MEFF_API __attribute__((visibility("default")))
#else
#define MEFF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum meff_status {
    MEFF_OK = 0,
    MEFF_E_INVALID_ARGUMENT = 1,
    MEFF_E_UNKNOWN_NAME = 2,
    MEFF_E_UNSUPPORTED = 3,
    MEFF_E_DOMAIN = 4,
    MEFF_E_CONVERGENCE = 5, /* result slots still hold the best estimate */
    MEFF_E_FIT = 6,
    MEFF_E_INTERNAL = 7
} meff_status;

MEFF_API const char* meff_status_string(meff_status s);
MEFF_API const char* meff_last_error(void);

/* ---- context: cutoffs and numerical options ---- */
typedef struct meff_context meff_context;

MEFF_API meff_status meff_context_create(meff_context** out);
MEFF_API void meff_context_destroy(meff_context* ctx);
MEFF_API meff_status meff_set_cutoffs(meff_context* ctx, double kappa_over_m, double lambda_over_m);
MEFF_API meff_status meff_set_lam_split(meff_context* ctx, double lam_split);
MEFF_API meff_status meff_set_rel_tol(meff_context* ctx, double rel_tol_2d);
MEFF_API meff_status meff_set_max_evals(meff_context* ctx, long long max_evals);
MEFF_API meff_status meff_set_bound_form(meff_context* ctx, int enabled);
MEFF_API meff_status meff_set_threads(meff_context* ctx, int threads);

/* ---- coefficients ---- */
enum { MEFF_METHOD_CLOSED_FORM = 0, MEFF_METHOD_QUADRATURE_1D, MEFF_METHOD_QUADRATURE_2D, MEFF_METHOD_MONTE_CARLO };

typedef struct meff_result {
    double value;
    double abs_err;
    long long n_eval;
    int method;
} meff_result;

MEFF_API const char* meff_method_name(int method);
MEFF_API size_t meff_coefficient_count(void);
MEFF_API const char* meff_coefficient_name(size_t i);
/* Evaluates a named coefficient at the context cutoffs. */
MEFF_API meff_status meff_compute(const meff_context* ctx, const char* name, meff_result* out);

typedef struct meff_series_coeffs {
    double a1;
    double a2_dominant;
    double c1;
    double c2_dominant;
    double e2;
} meff_series_coeffs;

MEFF_API meff_status meff_series(const meff_context* ctx, meff_series_coeffs* out);
MEFF_API meff_status meff_ratio(const meff_context* ctx, double e, double* out);

/* ---- scans and rate fits ---- */
enum { MEFF_MODEL_LOG = 0, MEFF_MODEL_LOG2, MEFF_MODEL_SQRT, MEFF_MODEL_LAMBDA2 };

typedef struct meff_scan meff_scan;

typedef struct meff_rate_fit {
    int model;
    double coefficient;
    double intercept;
    double residual;
    double plateau_lo;
    double plateau_hi;
    double corrected_lo;
    double corrected_hi;
} meff_rate_fit;

/* Fills out[0..*n) with lo, lo*10^(1/per_decade), ..., hi; cap is the capacity of out. */
MEFF_API meff_status meff_lambda_grid(double lo, double hi, int per_decade, double* out, size_t cap, size_t* n);
/* Evaluates the named coefficient at each cutoff; failed points are kept and flagged. */
MEFF_API meff_status meff_scan_run(const meff_context* ctx, const char* name, const double* lambdas, size_t n,
                                   meff_scan** out);
MEFF_API size_t meff_scan_size(const meff_scan* s);
MEFF_API meff_status meff_scan_point(const meff_scan* s, size_t i, double* lambda_over_m, meff_result* r, int* ok);
MEFF_API void meff_scan_destroy(meff_scan* s);
MEFF_API meff_status meff_fit_rate(const meff_scan* s, int model, meff_rate_fit* out);
/* All four models, best first. */
MEFF_API meff_status meff_model_select(const meff_scan* s, meff_rate_fit out[4]);
MEFF_API const char* meff_model_name(int model);
MEFF_API meff_status meff_model_parse(const char* name, int* model);

/* ---- term catalog ---- */
typedef struct meff_term {
    int table;
    int row;
    int phi_left;
    int h_mid;
    int phi_right;
    int sigmab;
    int pf;
    int h0inv;
    int order;
    const char* order_name;
    const char* printed_order;
    const char* note;
} meff_term;

MEFF_API size_t meff_catalog_size(void);
MEFF_API meff_status meff_catalog_term(size_t i, meff_term* out);
MEFF_API meff_status meff_predicted_order(int l, int m, int n, int* order);
MEFF_API const char* meff_order_name(int order);

/* ---- Monte Carlo oracle ---- */
typedef struct meff_oracle_row {
    const char* name;
    double mc_value;
    double mc_stderr;
    double reduced_value;
    double reduced_err;
    double z_score;
} meff_oracle_row;

/* Rows: E0, E3, E3_sigma_term (reduced value 0), E4. */
MEFF_API meff_status meff_oracle_run(const meff_context* ctx, unsigned long long seed, long long samples,
                                     meff_oracle_row* rows, size_t cap, size_t* n);

/* ---- acceptance report ---- */
enum { MEFF_CRITERION_PASS = 0, MEFF_CRITERION_FAIL = 1, MEFF_CRITERION_SKIPPED = 2 };

typedef struct meff_report meff_report;

typedef struct meff_report_options {
    double kappa_over_m;
    double lambda_cap; /* <= 0: standard scan ranges */
    double rel_tol_2d;
    long long mc_samples;
    unsigned long long seed;
    int threads;
    int enforce_budgets;
} meff_report_options;

typedef struct meff_criterion {
    const char* id;
    const char* title;
    int status;
    const char* detail;
    double seconds;
    double budget_seconds;
} meff_criterion;

MEFF_API void meff_report_options_default(meff_report_options* opt);
MEFF_API meff_status meff_report_run(const meff_report_options* opt, meff_report** out);
MEFF_API size_t meff_report_size(const meff_report* r);
MEFF_API meff_status meff_report_criterion(const meff_report* r, size_t i, meff_criterion* out);
MEFF_API const char* meff_report_narrative(const meff_report* r);
MEFF_API int meff_report_all_passed(const meff_report* r);
MEFF_API void meff_report_destroy(meff_report* r);

#ifdef __cplusplus
}
#endif

#endif
