#include "zetalab/zetalab.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>

#include "counting.hpp"
#include "divisor_arith.hpp"
#include "error.hpp"
#include "explicit_formulas.hpp"
#include "jutila_meansq.hpp"
#include "mellin.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "zeta_eval.hpp"

struct zl_divisor_table {
  zetalab::DivisorTable table;
};

struct zl_polynomial {
  zetalab::MainTermPolynomial poly;
};

struct zl_series {
  zetalab::ExplicitSeriesResult result;
};

struct zl_mellin_scan {
  zetalab::MellinScan scan;
};

namespace {

using namespace zetalab;

thread_local std::string last_error;

zl_status to_status(ErrorCode code) { return static_cast<zl_status>(static_cast<int>(code)); }

template <class F>
zl_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ZL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "CapacityExceeded: allocation failed";
    return ZL_CAPACITY_EXCEEDED;
  } catch (const std::exception& e) {
    last_error = std::string("Internal: ") + e.what();
    return ZL_INTERNAL;
  } catch (...) {
    last_error = "Internal: unknown exception";
    return ZL_INTERNAL;
  }
}

template <class... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) fail(ErrorCode::InvalidArgument, "null pointer argument");
}

EvalMethod method_of(int m) {
  switch (m) {
    case ZL_METHOD_EULER_MACLAURIN: return EvalMethod::EulerMaclaurin;
    case ZL_METHOD_RIEMANN_SIEGEL: return EvalMethod::RiemannSiegel;
    case ZL_METHOD_AUTO: return EvalMethod::Auto;
  }
  fail(ErrorCode::InvalidArgument, "unknown evaluation method");
}

int method_code(EvalMethod m) {
  switch (m) {
    case EvalMethod::EulerMaclaurin: return ZL_METHOD_EULER_MACLAURIN;
    case EvalMethod::RiemannSiegel: return ZL_METHOD_RIEMANN_SIEGEL;
    case EvalMethod::Auto: break;
  }
  return ZL_METHOD_AUTO;
}

EvalPolicy policy_of(const zl_eval_policy* p) {
  EvalPolicy out;
  if (p == nullptr) return out;
  out.method = method_of(p->method);
  out.target_abs_err = p->target_abs_err;
  out.rs_correction_order = p->rs_correction_order;
  if (p->accumulation != ZL_ACC_F64 && p->accumulation != ZL_ACC_DOUBLE_DOUBLE)
    fail(ErrorCode::InvalidArgument, "unknown accumulation mode");
  out.accumulation =
      p->accumulation == ZL_ACC_DOUBLE_DOUBLE ? Accumulation::DoubleDouble : Accumulation::F64;
  out.validate();
  return out;
}

QuadratureOptions quad_of(const zl_quad_options* q) {
  QuadratureOptions out;
  if (q == nullptr) return out;
  if (q->policy != ZL_QUAD_UNIFORM && q->policy != ZL_QUAD_ADAPTIVE)
    fail(ErrorCode::InvalidArgument, "unknown quadrature policy");
  out.policy = q->policy == ZL_QUAD_ADAPTIVE ? QuadPolicy::Adaptive : QuadPolicy::Uniform;
  out.target_rel_err = q->target_rel_err;
  out.max_evals = q->max_evals;
  out.spacing_factor = q->spacing_factor;
  out.eval = policy_of(&q->eval);
  out.validate();
  return out;
}

zl_moment_result moment_out(const MomentResult& r) { return {r.value, r.est_err, r.evals}; }

void fill_sample(const CriticalSample& s, zl_critical_sample* out) {
  *out = {s.t, s.value.real(), s.value.imag(), s.abs2k, s.err_bound, method_code(s.method)};
}

ErrorTermKind kind_of(int kind) {
  switch (kind) {
    case ZL_ERROR_E: return ErrorTermKind::E;
    case ZL_ERROR_E2: return ErrorTermKind::E2;
    case ZL_ERROR_ESTAR: return ErrorTermKind::Estar;
  }
  fail(ErrorCode::InvalidArgument, "unknown error-term kind");
}

ExplicitSeriesOptions series_options_of(const zl_series_options* o) {
  ExplicitSeriesOptions out;
  if (o == nullptr) return out;
  if (o->kernel != ZL_KERNEL_EXACT && o->kernel != ZL_KERNEL_SIMPLIFIED)
    fail(ErrorCode::InvalidArgument, "unknown kernel mode");
  if (o->sign != ZL_SIGN_MATCHED && o->sign != ZL_SIGN_PRINTED)
    fail(ErrorCode::InvalidArgument, "unknown series sign");
  if (o->n_max_override < 0) fail(ErrorCode::InvalidArgument, "n_max_override must be >= 0");
  out.kernel = o->kernel == ZL_KERNEL_SIMPLIFIED ? KernelMode::Simplified : KernelMode::Exact;
  out.sign = o->sign == ZL_SIGN_PRINTED ? SeriesSign::Printed : SeriesSign::Matched;
  if (o->n_max_override > 0) out.n_max_override = o->n_max_override;
  return out;
}

const DivisorTable* table_of(const zl_divisor_table* t) {
  return t == nullptr ? nullptr : &t->table;
}

}  // namespace

extern "C" {

const char* zl_status_name(zl_status status) {
  switch (status) {
    case ZL_OK: return "Ok";
    case ZL_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= static_cast<int>(ErrorCode::UnsupportedHeight) &&
      code <= static_cast<int>(ErrorCode::IoError))
    return error_name(static_cast<ErrorCode>(code));
  return "Unknown";
}

const char* zl_last_error(void) { return last_error.c_str(); }

const char* zl_version(void) { return "0.1.0"; }

void zl_set_threads(unsigned count) { set_thread_count(count); }

unsigned zl_get_threads(void) { return thread_count(); }

void zl_eval_policy_default(zl_eval_policy* policy) {
  if (policy == nullptr) return;
  const EvalPolicy d;
  *policy = {ZL_METHOD_AUTO, d.target_abs_err, d.rs_correction_order, ZL_ACC_F64};
}

zl_status zl_eval_zeta_half(double t, const zl_eval_policy* policy, double k,
                            zl_critical_sample* out) {
  return guarded([&] {
    need(out);
    fill_sample(eval_zeta_half(t, policy_of(policy), k), out);
  });
}

zl_status zl_abs_power_grid(double t0, double t1, double k, const zl_eval_policy* policy,
                            size_t max_points, double spacing_factor, zl_critical_sample* out,
                            size_t capacity, size_t* count) {
  return guarded([&] {
    need(count);
    const auto grid = abs_power_grid(t0, t1, k, policy_of(policy), max_points, spacing_factor);
    *count = grid.size();
    if (out == nullptr) return;
    if (grid.size() > capacity)
      fail(ErrorCode::CapacityExceeded, "output buffer holds " + std::to_string(capacity) +
                                            " samples, grid has " + std::to_string(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) fill_sample(grid[i], out + i);
  });
}

void zl_quad_options_default(zl_quad_options* options) {
  if (options == nullptr) return;
  const QuadratureOptions d;
  options->policy = ZL_QUAD_UNIFORM;
  options->target_rel_err = d.target_rel_err;
  options->max_evals = d.max_evals;
  options->spacing_factor = d.spacing_factor;
  zl_eval_policy_default(&options->eval);
}

zl_status zl_moment_I(double k, double T, const zl_quad_options* q, zl_moment_result* out) {
  return guarded([&] {
    need(out);
    *out = moment_out(moment_I(k, T, quad_of(q)));
  });
}

zl_status zl_smoothed_J(double k, double t, double G, const zl_quad_options* q,
                        zl_moment_result* out) {
  return guarded([&] {
    need(out);
    *out = moment_out(smoothed_J(k, t, G, quad_of(q)));
  });
}

zl_status zl_interval_moment(int ell, double t, double G, const zl_quad_options* q,
                             zl_moment_result* out) {
  return guarded([&] {
    need(out);
    *out = moment_out(interval_moment(ell, t, G, quad_of(q)));
  });
}

void zl_hybrid_spec_default(zl_hybrid_spec* spec) {
  if (spec == nullptr) return;
  const HybridMomentSpec d;
  spec->k = d.k;
  spec->ell = d.ell;
  spec->m = d.m;
  spec->T = d.T;
  spec->G = d.G;
  zl_quad_options_default(&spec->outer);
  zl_quad_options_default(&spec->inner);
  spec->allow_any_even = 0;
}

namespace {
HybridMomentSpec hybrid_of(const zl_hybrid_spec* s) {
  HybridMomentSpec out;
  out.k = s->k;
  out.ell = s->ell;
  out.m = s->m;
  out.T = s->T;
  out.G = s->G;
  out.outer = quad_of(&s->outer);
  out.inner = quad_of(&s->inner);
  out.allow_any_even = s->allow_any_even != 0;
  return out;
}
}  // namespace

zl_status zl_hybrid_moment(const zl_hybrid_spec* spec, zl_moment_result* out) {
  return guarded([&] {
    need(spec, out);
    *out = moment_out(hybrid_moment(hybrid_of(spec)));
  });
}

zl_status zl_hybrid_moment_exchanged(const zl_hybrid_spec* spec, zl_moment_result* out) {
  return guarded([&] {
    need(spec, out);
    *out = moment_out(hybrid_moment_exchanged(hybrid_of(spec)));
  });
}

zl_status zl_divisor_table_create(int64_t limit, zl_divisor_table** out) {
  return guarded([&] {
    need(out);
    *out = nullptr;
    *out = new zl_divisor_table{DivisorTable::build(limit)};
  });
}

void zl_divisor_table_free(zl_divisor_table* table) { delete table; }

int64_t zl_divisor_table_limit(const zl_divisor_table* table) {
  return table == nullptr ? 0 : table->table.limit();
}

zl_status zl_divisor_d(const zl_divisor_table* table, int64_t n, uint32_t* out) {
  return guarded([&] {
    need(table, out);
    *out = table->table.d(n);
  });
}

zl_status zl_delta(const zl_divisor_table* table, double x, double* out) {
  return guarded([&] {
    need(table, out);
    *out = delta(x, table->table);
  });
}

zl_status zl_delta_star(const zl_divisor_table* table, double x, double* out) {
  return guarded([&] {
    need(table, out);
    *out = delta_star(x, table->table);
  });
}

zl_status zl_delta_star_from_delta(const zl_divisor_table* table, double x, double* out) {
  return guarded([&] {
    need(table, out);
    *out = delta_star_from_delta(x, table->table);
  });
}

zl_status zl_polynomial_p1(zl_polynomial** out) {
  return guarded([&] {
    need(out);
    *out = new zl_polynomial{MainTermPolynomial::p1()};
  });
}

zl_status zl_polynomial_p4_leading(zl_polynomial** out) {
  return guarded([&] {
    need(out);
    *out = new zl_polynomial{MainTermPolynomial::p4_leading()};
  });
}

zl_status zl_polynomial_fit_p4(double T_lo, double T_hi, int sample_count,
                               const zl_quad_options* q, zl_polynomial** out) {
  return guarded([&] {
    need(out);
    *out = nullptr;
    *out = new zl_polynomial{fit_p4(T_lo, T_hi, sample_count, quad_of(q))};
  });
}

void zl_polynomial_free(zl_polynomial* poly) { delete poly; }

zl_status zl_polynomial_get_info(const zl_polynomial* poly, zl_polynomial_info* out) {
  return guarded([&] {
    need(poly, out);
    const auto& p = poly->poly;
    *out = {};
    out->k = p.k;
    out->degree = p.degree();
    out->provenance =
        p.provenance == Provenance::Exact ? ZL_PROVENANCE_EXACT : ZL_PROVENANCE_FITTED;
    const std::size_t n = std::min<std::size_t>(p.coeffs.size(), 17);
    std::copy_n(p.coeffs.begin(), n, out->coeffs);
    out->fit_rms_residual = p.fit_rms_residual;
    out->fit_max_residual = p.fit_max_residual;
    out->condition_number = p.condition_number;
  });
}

zl_status zl_eval_main_term(const zl_polynomial* poly, double T, double* out) {
  return guarded([&] {
    need(poly, out);
    *out = eval_main_term(poly->poly, T);
  });
}

namespace {
zl_error_term_sample sample_out(const ErrorTermSample& s, int kind) {
  return {s.T, kind, s.value, s.moment, s.main};
}
}  // namespace

zl_status zl_error_term(int kind, double T, const zl_polynomial* poly, const zl_quad_options* q,
                        const zl_divisor_table* table, zl_error_term_sample* out) {
  return guarded([&] {
    need(poly, out);
    *out = sample_out(error_term(kind_of(kind), T, poly->poly, quad_of(q), table_of(table)), kind);
  });
}

zl_status zl_error_term_scan(int kind, const double* heights, size_t count,
                             const zl_polynomial* poly, const zl_quad_options* q,
                             const zl_divisor_table* table, zl_error_term_sample* out) {
  return guarded([&] {
    need(heights, poly, out);
    const std::vector<double> hs(heights, heights + count);
    const auto samples =
        error_term_scan(kind_of(kind), hs, poly->poly, quad_of(q), table_of(table));
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = sample_out(samples[i], kind);
  });
}

zl_status zl_f_phase(double T, int64_t n, double* out) {
  return guarded([&] {
    need(out);
    *out = f_phase(T, n);
  });
}

void zl_series_options_default(zl_series_options* options) {
  if (options == nullptr) return;
  *options = {ZL_KERNEL_EXACT, ZL_SIGN_MATCHED, 0};
}

zl_status zl_atkinson_series(double T, double G, const zl_series_options* options,
                             const zl_divisor_table* table, zl_series** out) {
  return guarded([&] {
    need(table, out);
    *out = nullptr;
    *out = new zl_series{atkinson_series_J1(T, G, series_options_of(options), table->table)};
  });
}

void zl_series_free(zl_series* series) { delete series; }

zl_status zl_series_get_summary(const zl_series* series, zl_series_summary* out) {
  return guarded([&] {
    need(series, out);
    const auto& r = series->result;
    *out = {r.T,
            r.G,
            r.n_max,
            r.main_term,
            r.oscillating_sum,
            r.tail_estimate,
            r.kernel == KernelMode::Exact ? ZL_KERNEL_EXACT : ZL_KERNEL_SIMPLIFIED,
            r.sign == SeriesSign::Matched ? ZL_SIGN_MATCHED : ZL_SIGN_PRINTED};
  });
}

zl_status zl_series_get_terms(const zl_series* series, double* terms, double* envelopes,
                              size_t capacity) {
  return guarded([&] {
    need(series);
    const auto& r = series->result;
    const std::size_t n = std::min(capacity, r.terms.size());
    if (terms != nullptr) std::copy_n(r.terms.begin(), n, terms);
    if (envelopes != nullptr) std::copy_n(r.envelopes.begin(), n, envelopes);
  });
}

zl_status zl_j1_residual_eval(double T, double G, const zl_quad_options* q,
                              const zl_divisor_table* table, const zl_series_options* options,
                              zl_j1_residual* out) {
  return guarded([&] {
    need(table, out);
    const auto r = j1_residual(T, G, quad_of(q), table->table, series_options_of(options));
    *out = {r.direct, r.direct_err, r.main_term, r.oscillating_sum, r.residual, r.n_max};
  });
}

zl_status zl_j1_from_estar(double t, double G, const zl_divisor_table* table,
                           const zl_polynomial* poly, const zl_quad_options* q,
                           zl_moment_result* out) {
  return guarded([&] {
    need(table, poly, out);
    const auto r = j1_from_estar(t, G, table->table, poly->poly, quad_of(q));
    *out = {r.value, r.est_err, r.evals};
  });
}

zl_status zl_count_lemma3(int64_t M, int64_t Mp, double delta, double c_bound,
                          zl_count_report* out) {
  return guarded([&] {
    need(out);
    const auto r = count_lemma3({M, Mp, delta, c_bound});
    *out = {r.count, r.bound_value, r.ratio};
  });
}

zl_status zl_count_exact_sqrt_solutions(int64_t M, int64_t Mp, int64_t* out) {
  return guarded([&] {
    need(out);
    *out = count_exact_sqrt_solutions(M, Mp);
  });
}

zl_status zl_count_lemma4(int64_t N, double delta, int k_root, double c_bound, int method,
                          zl_count_report* out) {
  return guarded([&] {
    need(out);
    const CountQuery4 q{N, delta, k_root, c_bound};
    CountReport r;
    if (method == ZL_COUNT_PAIR_SUMS)
      r = count_lemma4(q);
    else if (method == ZL_COUNT_NAIVE)
      r = count_lemma4_naive(q);
    else
      fail(ErrorCode::InvalidArgument, "unknown counting method");
    *out = {r.count, r.bound_value, r.ratio};
  });
}

zl_status zl_diff_meansq(double T, double H, double U, int method, int norm,
                         const zl_quad_options* q, const zl_divisor_table* table,
                         zl_moment_result* out) {
  return guarded([&] {
    need(out);
    if (method != ZL_DIFF_DIRECT && method != ZL_DIFF_SERIES)
      fail(ErrorCode::InvalidArgument, "unknown difference method");
    if (norm != ZL_NORM_FOR_E && norm != ZL_NORM_PRINTED)
      fail(ErrorCode::InvalidArgument, "unknown series normalisation");
    *out = moment_out(diff_meansq(
        {T, H, U}, method == ZL_DIFF_DIRECT ? DiffMethod::Direct : DiffMethod::Series, quad_of(q),
        table_of(table),
        norm == ZL_NORM_FOR_E ? SeriesNormalization::ForE : SeriesNormalization::Printed));
  });
}

zl_status zl_asymp_ratio(double T, double U, const zl_quad_options* q, double* out) {
  return guarded([&] {
    need(out);
    *out = asymp_ratio(T, U, quad_of(q));
  });
}

zl_status zl_asymp_ratio_subrange(double T, double H, double U, const zl_quad_options* q,
                                  double* out) {
  return guarded([&] {
    need(out);
    *out = asymp_ratio_subrange(T, H, U, quad_of(q));
  });
}

zl_status zl_z2_eval(double sigma, double t, double X_trunc, double tail_exponent,
                     const zl_quad_options* q, zl_mellin_result* out) {
  return guarded([&] {
    need(out);
    const auto r = z2_eval({sigma, t, X_trunc, tail_exponent}, quad_of(q));
    *out = {r.value.real(), r.value.imag(), r.modulus, r.est_err,
            r.tail_bound,   r.tail_constant, r.evals};
  });
}

zl_status zl_z2_meansq_scan(double sigma, double T_lo, double T_hi, int steps, double X_trunc,
                            double tail_exponent, double rho, const zl_quad_options* q,
                            zl_mellin_scan** out) {
  return guarded([&] {
    need(out);
    *out = nullptr;
    *out = new zl_mellin_scan{
        z2_meansq_scan(sigma, T_lo, T_hi, steps, X_trunc, tail_exponent, quad_of(q), rho)};
  });
}

void zl_mellin_scan_free(zl_mellin_scan* scan) { delete scan; }

zl_status zl_mellin_scan_get_summary(const zl_mellin_scan* scan, zl_mellin_scan_summary* out) {
  return guarded([&] {
    need(scan, out);
    const auto& s = scan->scan;
    *out = {s.sigma, s.rho, s.theorem_exponent, s.fitted_slope, s.tail_exponent, s.points.size()};
  });
}

zl_status zl_mellin_scan_get_points(const zl_mellin_scan* scan, zl_mellin_scan_point* out,
                                    size_t capacity) {
  return guarded([&] {
    need(scan, out);
    const auto& pts = scan->scan.points;
    const std::size_t n = std::min(capacity, pts.size());
    for (std::size_t i = 0; i < n; ++i) out[i] = {pts[i].t, pts[i].abs2, pts[i].partial};
  });
}

zl_status zl_fit_tail_exponent(double x_lo, double x_hi, const zl_quad_options* q, double* out) {
  return guarded([&] {
    need(out);
    *out = fit_tail_exponent(x_lo, x_hi, quad_of(q));
  });
}

}  // extern "C"
