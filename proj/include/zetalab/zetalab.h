#ifndef ZETALAB_ZETALAB_H
#define ZETALAB_ZETALAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ZL_API __declspec(dllexport)
#else
#define ZL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; on failure a message is
 * available from zl_last_error() on the calling thread. */
typedef enum zl_status {
  ZL_OK = 0,
  ZL_UNSUPPORTED_HEIGHT = 1,
  ZL_BUDGET_EXCEEDED = 2,
  ZL_CAPACITY_EXCEEDED = 3,
  ZL_TABLE_TOO_SMALL = 4,
  ZL_DOMAIN_ERROR = 5,
  ZL_ILL_CONDITIONED = 6,
  ZL_TAIL_DIVERGES = 7,
  ZL_INVALID_ARGUMENT = 8,
  ZL_CONFIG_INVALID = 9,
  ZL_SCHEMA_MISMATCH = 10,
  ZL_IO_ERROR = 11,
  ZL_INTERNAL = 99
} zl_status;

ZL_API const char* zl_status_name(zl_status status);
ZL_API const char* zl_last_error(void);
ZL_API const char* zl_version(void);

/* 0 selects the hardware concurrency. Results do not depend on this value. */
ZL_API void zl_set_threads(unsigned count);
ZL_API unsigned zl_get_threads(void);

/* ---- evaluation ------------------------------------------------------- */

typedef enum zl_eval_method {
  ZL_METHOD_EULER_MACLAURIN = 0,
  ZL_METHOD_RIEMANN_SIEGEL = 1,
  ZL_METHOD_AUTO = 2
} zl_eval_method;

typedef enum zl_accumulation { ZL_ACC_F64 = 0, ZL_ACC_DOUBLE_DOUBLE = 1 } zl_accumulation;

typedef struct zl_eval_policy {
  int method; /* zl_eval_method */
  double target_abs_err;
  int rs_correction_order; /* 0..4 */
  int accumulation;        /* zl_accumulation */
} zl_eval_policy;

ZL_API void zl_eval_policy_default(zl_eval_policy* policy);

typedef struct zl_critical_sample {
  double t;
  double re;
  double im;
  double abs2k;
  double err_bound;
  int method; /* method actually used */
} zl_critical_sample;

ZL_API zl_status zl_eval_zeta_half(double t, const zl_eval_policy* policy, double k,
                                   zl_critical_sample* out);

/* With out == NULL only *count is set. Otherwise at most capacity samples are
 * written and ZL_CAPACITY_EXCEEDED is returned if the grid is larger. */
ZL_API zl_status zl_abs_power_grid(double t0, double t1, double k, const zl_eval_policy* policy,
                                   size_t max_points, double spacing_factor,
                                   zl_critical_sample* out, size_t capacity, size_t* count);

/* ---- quadrature and moments ------------------------------------------ */

typedef enum zl_quad_policy { ZL_QUAD_UNIFORM = 0, ZL_QUAD_ADAPTIVE = 1 } zl_quad_policy;

typedef struct zl_quad_options {
  int policy; /* zl_quad_policy */
  double target_rel_err;
  int64_t max_evals;
  double spacing_factor;
  zl_eval_policy eval;
} zl_quad_options;

ZL_API void zl_quad_options_default(zl_quad_options* options);

typedef struct zl_moment_result {
  double value;
  double est_err;
  int64_t evals;
} zl_moment_result;

ZL_API zl_status zl_moment_I(double k, double T, const zl_quad_options* q, zl_moment_result* out);
ZL_API zl_status zl_smoothed_J(double k, double t, double G, const zl_quad_options* q,
                               zl_moment_result* out);
ZL_API zl_status zl_interval_moment(int ell, double t, double G, const zl_quad_options* q,
                                    zl_moment_result* out);

typedef struct zl_hybrid_spec {
  int k;
  int ell;
  int m;
  double T;
  double G;
  zl_quad_options outer;
  zl_quad_options inner;
  int allow_any_even;
} zl_hybrid_spec;

ZL_API void zl_hybrid_spec_default(zl_hybrid_spec* spec);
ZL_API zl_status zl_hybrid_moment(const zl_hybrid_spec* spec, zl_moment_result* out);
ZL_API zl_status zl_hybrid_moment_exchanged(const zl_hybrid_spec* spec, zl_moment_result* out);

/* ---- divisor arithmetic ----------------------------------------------- */

typedef struct zl_divisor_table zl_divisor_table;

ZL_API zl_status zl_divisor_table_create(int64_t limit, zl_divisor_table** out);
ZL_API void zl_divisor_table_free(zl_divisor_table* table);
ZL_API int64_t zl_divisor_table_limit(const zl_divisor_table* table);
ZL_API zl_status zl_divisor_d(const zl_divisor_table* table, int64_t n, uint32_t* out);
ZL_API zl_status zl_delta(const zl_divisor_table* table, double x, double* out);
ZL_API zl_status zl_delta_star(const zl_divisor_table* table, double x, double* out);
ZL_API zl_status zl_delta_star_from_delta(const zl_divisor_table* table, double x, double* out);

/* ---- main terms and explicit formulas --------------------------------- */

typedef enum zl_provenance { ZL_PROVENANCE_EXACT = 0, ZL_PROVENANCE_FITTED = 1 } zl_provenance;

typedef struct zl_polynomial zl_polynomial;

ZL_API zl_status zl_polynomial_p1(zl_polynomial** out);
ZL_API zl_status zl_polynomial_p4_leading(zl_polynomial** out);
ZL_API zl_status zl_polynomial_fit_p4(double T_lo, double T_hi, int sample_count,
                                      const zl_quad_options* q, zl_polynomial** out);
ZL_API void zl_polynomial_free(zl_polynomial* poly);

typedef struct zl_polynomial_info {
  int k;
  int degree;
  int provenance; /* zl_provenance */
  double coeffs[17];
  double fit_rms_residual;
  double fit_max_residual;
  double condition_number;
} zl_polynomial_info;

ZL_API zl_status zl_polynomial_get_info(const zl_polynomial* poly, zl_polynomial_info* out);
ZL_API zl_status zl_eval_main_term(const zl_polynomial* poly, double T, double* out);

typedef enum zl_error_kind { ZL_ERROR_E = 0, ZL_ERROR_E2 = 1, ZL_ERROR_ESTAR = 2 } zl_error_kind;

typedef struct zl_error_term_sample {
  double T;
  int kind; /* zl_error_kind */
  double value;
  double moment;
  double main;
} zl_error_term_sample;

/* table may be NULL unless kind is ZL_ERROR_ESTAR. */
ZL_API zl_status zl_error_term(int kind, double T, const zl_polynomial* poly,
                               const zl_quad_options* q, const zl_divisor_table* table,
                               zl_error_term_sample* out);
/* One cumulative grid for all heights; out has room for count samples. */
ZL_API zl_status zl_error_term_scan(int kind, const double* heights, size_t count,
                                    const zl_polynomial* poly, const zl_quad_options* q,
                                    const zl_divisor_table* table, zl_error_term_sample* out);

ZL_API zl_status zl_f_phase(double T, int64_t n, double* out);

typedef enum zl_kernel_mode { ZL_KERNEL_EXACT = 0, ZL_KERNEL_SIMPLIFIED = 1 } zl_kernel_mode;
/* MATCHED is the sign that reproduces direct quadrature; PRINTED is its negative. */
typedef enum zl_series_sign { ZL_SIGN_MATCHED = 0, ZL_SIGN_PRINTED = 1 } zl_series_sign;

typedef struct zl_series_options {
  int kernel; /* zl_kernel_mode */
  int sign;   /* zl_series_sign */
  int64_t n_max_override; /* 0 keeps ceil(T G^-2 log T) */
} zl_series_options;

ZL_API void zl_series_options_default(zl_series_options* options);

typedef struct zl_series zl_series;

typedef struct zl_series_summary {
  double T;
  double G;
  int64_t n_max;
  double main_term;
  double oscillating_sum;
  double tail_estimate;
  int kernel;
  int sign;
} zl_series_summary;

ZL_API zl_status zl_atkinson_series(double T, double G, const zl_series_options* options,
                                    const zl_divisor_table* table, zl_series** out);
ZL_API void zl_series_free(zl_series* series);
ZL_API zl_status zl_series_get_summary(const zl_series* series, zl_series_summary* out);
/* Writes min(capacity, n_max) terms and envelopes; either array may be NULL. */
ZL_API zl_status zl_series_get_terms(const zl_series* series, double* terms, double* envelopes,
                                     size_t capacity);

typedef struct zl_j1_residual {
  double direct;
  double direct_err;
  double main_term;
  double oscillating_sum;
  double residual;
  int64_t n_max;
} zl_j1_residual;

ZL_API zl_status zl_j1_residual_eval(double T, double G, const zl_quad_options* q,
                                     const zl_divisor_table* table,
                                     const zl_series_options* options, zl_j1_residual* out);

ZL_API zl_status zl_j1_from_estar(double t, double G, const zl_divisor_table* table,
                                  const zl_polynomial* poly, const zl_quad_options* q,
                                  zl_moment_result* out);

/* ---- counting --------------------------------------------------------- */

typedef struct zl_count_report {
  int64_t count;
  double bound_value;
  double ratio;
} zl_count_report;

typedef enum zl_count_method { ZL_COUNT_PAIR_SUMS = 0, ZL_COUNT_NAIVE = 1 } zl_count_method;

ZL_API zl_status zl_count_lemma3(int64_t M, int64_t Mp, double delta, double c_bound,
                                 zl_count_report* out);
ZL_API zl_status zl_count_exact_sqrt_solutions(int64_t M, int64_t Mp, int64_t* out);
ZL_API zl_status zl_count_lemma4(int64_t N, double delta, int k_root, double c_bound,
                                 int method, zl_count_report* out);

/* ---- short-interval mean square --------------------------------------- */

typedef enum zl_diff_method { ZL_DIFF_DIRECT = 0, ZL_DIFF_SERIES = 1 } zl_diff_method;
typedef enum zl_series_norm { ZL_NORM_FOR_E = 0, ZL_NORM_PRINTED = 1 } zl_series_norm;

ZL_API zl_status zl_diff_meansq(double T, double H, double U, int method, int norm,
                                const zl_quad_options* q, const zl_divisor_table* table,
                                zl_moment_result* out);
ZL_API zl_status zl_asymp_ratio(double T, double U, const zl_quad_options* q, double* out);
ZL_API zl_status zl_asymp_ratio_subrange(double T, double H, double U, const zl_quad_options* q,
                                         double* out);

/* ---- Mellin transform ------------------------------------------------- */

typedef struct zl_mellin_result {
  double re;
  double im;
  double modulus;
  double est_err;
  double tail_bound;
  double tail_constant;
  int64_t evals;
} zl_mellin_result;

ZL_API zl_status zl_z2_eval(double sigma, double t, double X_trunc, double tail_exponent,
                            const zl_quad_options* q, zl_mellin_result* out);

typedef struct zl_mellin_scan zl_mellin_scan;

typedef struct zl_mellin_scan_summary {
  double sigma;
  double rho;
  double theorem_exponent;
  double fitted_slope;
  double tail_exponent;
  size_t points;
} zl_mellin_scan_summary;

typedef struct zl_mellin_scan_point {
  double t;
  double abs2;
  double partial;
} zl_mellin_scan_point;

ZL_API zl_status zl_z2_meansq_scan(double sigma, double T_lo, double T_hi, int steps,
                                   double X_trunc, double tail_exponent, double rho,
                                   const zl_quad_options* q, zl_mellin_scan** out);
ZL_API void zl_mellin_scan_free(zl_mellin_scan* scan);
ZL_API zl_status zl_mellin_scan_get_summary(const zl_mellin_scan* scan,
                                            zl_mellin_scan_summary* out);
ZL_API zl_status zl_mellin_scan_get_points(const zl_mellin_scan* scan, zl_mellin_scan_point* out,
                                           size_t capacity);
ZL_API zl_status zl_fit_tail_exponent(double x_lo, double x_hi, const zl_quad_options* q,
                                      double* out);

#ifdef __cplusplus
}
#endif

#endif /* ZETALAB_ZETALAB_H */
