#include "moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "constants.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

namespace {

void check_budget(std::int64_t needed, std::int64_t budget) {
  if (needed > budget)
    fail(ErrorCode::BudgetExceeded, "quadrature needs " + std::to_string(needed) +
                                        " evaluations, budget " + std::to_string(budget));
}

std::size_t even_intervals(double length, double h_max) {
  auto n = static_cast<std::size_t>(std::ceil(length / h_max));
  n = std::max<std::size_t>(n, 8);
  if (n % 2 == 1) ++n;
  return n;
}

struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::size_t intervals = 0;
  std::vector<double> abs2;  // intervals + 1 samples
  double value = 0.0;
  double error = 0.0;
};

void evaluate_panel(Panel& p, const CriticalIntegrand& integrand) {
  const double h = (p.b - p.a) / static_cast<double>(p.intervals);
  std::vector<double> f(p.abs2.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = integrand(p.a + h * static_cast<double>(i), p.abs2[i]);
  const UniformSamples fine(p.a, h, std::move(f));
  p.value = fine.total();
  p.error = std::abs(p.value - fine.coarsened().total());
}

// Halves the spacing of a panel, reusing the existing samples.
std::int64_t refine_panel(Panel& p, const EvalPolicy& eval) {
  const double h = (p.b - p.a) / static_cast<double>(p.intervals);
  const auto mids = sample_abs2(p.a + 0.5 * h, h, p.intervals, eval);
  std::vector<double> merged(2 * p.intervals + 1);
  for (std::size_t i = 0; i < p.intervals; ++i) {
    merged[2 * i] = p.abs2[i];
    merged[2 * i + 1] = mids[i];
  }
  merged[2 * p.intervals] = p.abs2[p.intervals];
  p.abs2 = std::move(merged);
  p.intervals *= 2;
  return static_cast<std::int64_t>(mids.size());
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

CriticalIntegral integrate_uniform(const QuadratureSpec& spec, double h_max,
                                   const CriticalIntegrand& integrand) {
  const auto& q = spec.options;
  Panel p{spec.a, spec.b, even_intervals(spec.b - spec.a, h_max), {}, 0.0, 0.0};
  check_budget(static_cast<std::int64_t>(p.intervals + 1), q.max_evals);
  const double h = (p.b - p.a) / static_cast<double>(p.intervals);
  p.abs2 = sample_abs2(p.a, h, p.intervals + 1, q.eval);
  std::int64_t evals = static_cast<std::int64_t>(p.abs2.size());
  evaluate_panel(p, integrand);
  while (p.error > q.target_rel_err * std::abs(p.value)) {
    check_budget(evals + static_cast<std::int64_t>(p.intervals), q.max_evals);
    evals += refine_panel(p, q.eval);
    evaluate_panel(p, integrand);
  }
  return {{p.value, p.error, evals}, max_of(p.abs2)};
}

// Panels of fixed width refined individually where their error estimate is
// largest; since the integrand is positive and oscillatory this concentrates
// work around the peaks of |zeta|.
CriticalIntegral integrate_adaptive(const QuadratureSpec& spec, double h_max,
                                    const CriticalIntegrand& integrand) {
  const auto& q = spec.options;
  constexpr std::size_t kPanelIntervals = 32;
  const std::size_t total = even_intervals(spec.b - spec.a, h_max);
  const std::size_t n_panels = std::max<std::size_t>(1, total / kPanelIntervals);
  check_budget(static_cast<std::int64_t>(n_panels * kPanelIntervals + 1), q.max_evals);
  std::vector<Panel> panels(n_panels);
  const double width = (spec.b - spec.a) / static_cast<double>(n_panels);
  std::int64_t evals = 0;
  for (std::size_t j = 0; j < n_panels; ++j) {
    auto& p = panels[j];
    p.a = spec.a + width * static_cast<double>(j);
    p.b = (j + 1 == n_panels) ? spec.b : spec.a + width * static_cast<double>(j + 1);
    p.intervals = kPanelIntervals;
    p.abs2 = sample_abs2(p.a, (p.b - p.a) / kPanelIntervals, kPanelIntervals + 1, q.eval);
    evals += static_cast<std::int64_t>(kPanelIntervals + 1);
    evaluate_panel(p, integrand);
  }
  auto totals = [&] {
    std::vector<double> v(n_panels), e(n_panels);
    for (std::size_t j = 0; j < n_panels; ++j) {
      v[j] = panels[j].value;
      e[j] = panels[j].error;
    }
    return std::pair{pairwise_sum(v), pairwise_sum(e)};
  };
  auto [value, error] = totals();
  while (error > q.target_rel_err * std::abs(value)) {
    const double threshold = error / static_cast<double>(n_panels);
    for (auto& p : panels) {
      if (p.error < threshold) continue;
      check_budget(evals + static_cast<std::int64_t>(p.intervals), q.max_evals);
      evals += refine_panel(p, q.eval);
      evaluate_panel(p, integrand);
    }
    std::tie(value, error) = totals();
  }
  double peak = 0.0;
  for (const auto& p : panels) peak = std::max(peak, max_of(p.abs2));
  return {{value, error, evals}, peak};
}

int half_exponent(int ell) { return ell / 2; }

}  // namespace

void QuadratureOptions::validate() const {
  require(target_rel_err > 0.0 && target_rel_err <= 0.1, ErrorCode::InvalidArgument,
          "target_rel_err must lie in (0, 0.1]");
  require(max_evals >= 16, ErrorCode::InvalidArgument, "max_evals must be at least 16");
  require(spacing_factor > 0.0 && spacing_factor <= 0.25, ErrorCode::InvalidArgument,
          "spacing_factor must lie in (0, 1/4]");
  eval.validate();
}

void QuadratureSpec::validate() const {
  require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorCode::InvalidArgument,
          "quadrature interval needs a < b");
  options.validate();
}

double moment_spacing(double t_max, double k, const QuadratureOptions& q) {
  return zero_gap_spacing(t_max, q.spacing_factor) / std::max(1.0, k);
}

CriticalIntegral integrate_critical(const QuadratureSpec& spec, double k_scale,
                                    const CriticalIntegrand& integrand) {
  spec.validate();
  const double t_max = std::max(std::abs(spec.a), std::abs(spec.b));
  const double h_max = moment_spacing(t_max, k_scale, spec.options);
  return spec.options.policy == QuadPolicy::Uniform
             ? integrate_uniform(spec, h_max, integrand)
             : integrate_adaptive(spec, h_max, integrand);
}

MomentResult moment_I(double k, double T, const QuadratureOptions& q) {
  require(std::isfinite(k) && k > 0.0, ErrorCode::InvalidArgument, "k must be positive");
  require(std::isfinite(T) && T >= 0.0, ErrorCode::InvalidArgument, "T must be >= 0");
  if (T == 0.0) return {};
  const QuadratureSpec spec{0.0, T, q};
  return integrate_critical(spec, k, [k](double, double a2) { return nonneg_power(a2, k); })
      .result;
}

MomentResult smoothed_J(double k, double t, double G, const QuadratureOptions& q) {
  require(std::isfinite(k) && k > 0.0, ErrorCode::InvalidArgument, "k must be positive");
  require(std::isfinite(t) && std::isfinite(G) && G >= 1.0 && G <= 0.5 * t,
          ErrorCode::InvalidArgument, "smoothed_J requires 1 <= G <= t/2");
  const double reach = G * std::log(t);
  const double norm = 1.0 / (constants::sqrt_pi * G);
  const QuadratureSpec spec{t - reach, t + reach, q};
  auto out = integrate_critical(spec, k, [=](double x, double a2) {
    const double u = (x - t) / G;
    return nonneg_power(a2, k) * std::exp(-u * u) * norm;
  });
  const double log_t = std::log(t);
  out.result.est_err += std::exp(-log_t * log_t) * nonneg_power(out.max_abs2, k);
  return out.result;
}

MomentResult interval_moment(int ell, double t, double G, const QuadratureOptions& q) {
  require(ell > 0 && ell % 2 == 0, ErrorCode::InvalidArgument,
          "interval_moment needs a positive even exponent");
  require(std::isfinite(t) && std::isfinite(G) && G > 0.0 && G < t,
          ErrorCode::InvalidArgument, "interval_moment requires 0 < G < t");
  const double k = half_exponent(ell);
  const QuadratureSpec spec{t - G, t + G, q};
  return integrate_critical(spec, k, [k](double, double a2) { return nonneg_power(a2, k); })
      .result;
}

void HybridMomentSpec::validate() const {
  auto studied = [](int e) { return e == 2 || e == 4; };
  require(m >= 1, ErrorCode::InvalidArgument, "m must be a positive integer");
  require(ell > 0 && ell % 2 == 0 && k >= 0 && k % 2 == 0, ErrorCode::InvalidArgument,
          "k and ell must be even (ell positive)");
  if (!allow_any_even)
    require(studied(k) && studied(ell), ErrorCode::InvalidArgument,
            "k and ell restricted to {2, 4} unless allow_any_even is set");
  require(std::isfinite(T) && T >= 10.0, ErrorCode::InvalidArgument, "T must be >= 10");
  require(std::isfinite(G) && G > 0.0 && G <= T, ErrorCode::InvalidArgument,
          "G must satisfy 0 < G <= T");
  outer.validate();
  inner.validate();
}

namespace {

// Shared-grid evaluation of the hybrid moment on abs2 samples starting at
// origin with spacing h.
double hybrid_on_grid(const HybridMomentSpec& s, const std::vector<double>& abs2, double origin,
                      double h) {
  const double half_l = half_exponent(s.ell);
  const double half_k = half_exponent(s.k);
  const UniformSamples inner(origin, h, powers_of(abs2, half_l));
  const auto i0 = static_cast<std::size_t>(std::floor((s.T - origin) / h));
  const auto i1 = static_cast<std::size_t>(std::ceil((2.0 * s.T - origin) / h));
  std::vector<double> g(i1 - i0 + 1);
  for (std::size_t i = i0; i <= i1; ++i) {
    const double t = inner.node(i);
    const double window = inner.integral(t - s.G, t + s.G);
    g[i - i0] = nonneg_power(abs2[i], half_k) * nonneg_power(window, s.m);
  }
  const UniformSamples outer(inner.node(i0), h, std::move(g));
  return outer.integral(s.T, 2.0 * s.T);
}

}  // namespace

MomentResult hybrid_moment(const HybridMomentSpec& spec) {
  spec.validate();
  const double top = 2.0 * spec.T + spec.G;
  const double kmax = std::max(half_exponent(spec.k), half_exponent(spec.ell));
  // Even number of cells per G keeps the coarse (2h) grid aligned as well.
  double h = std::min(moment_spacing(top, kmax, spec.inner), 0.5 * spec.G);
  const double origin = spec.T - spec.G - 4.0 * h;
  const auto count = static_cast<std::size_t>(std::ceil((spec.T + 2.0 * spec.G + 8.0 * h) / h)) + 1;
  check_budget(static_cast<std::int64_t>(count),
               std::min(spec.inner.max_evals, spec.outer.max_evals));
  const auto abs2 = sample_abs2(origin, h, count, spec.inner.eval);
  const double fine = hybrid_on_grid(spec, abs2, origin, h);

  std::vector<double> coarse_abs2;
  for (std::size_t i = 0; i < abs2.size(); i += 2) coarse_abs2.push_back(abs2[i]);
  double coarse = fine;
  if (2.0 * h <= spec.G) coarse = hybrid_on_grid(spec, coarse_abs2, origin, 2.0 * h);
  return {fine, std::abs(fine - coarse), static_cast<std::int64_t>(count)};
}

namespace {

double exchanged_on_grid(const HybridMomentSpec& s, const std::vector<double>& abs2,
                         double origin, double h) {
  const std::size_t count = abs2.size();
  const UniformSamples outer_power(origin, h, powers_of(abs2, half_exponent(s.k)));
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = outer_power.node(i);
    const double lo = std::max(s.T, x - s.G);
    const double hi = std::min(2.0 * s.T, x + s.G);
    const double window = (hi > lo) ? outer_power.integral(lo, hi) : 0.0;
    g[i] = nonneg_power(abs2[i], half_exponent(s.ell)) * window;
  }
  const UniformSamples integrand(origin, h, std::move(g));
  // The clipped window has kinks at T +- G and 2T +- G; integrate piecewise.
  const double a = s.T - s.G;
  const double b = 2.0 * s.T + s.G;
  const double knots[] = {a, std::min(s.T + s.G, b), std::max(2.0 * s.T - s.G, a), b};
  double value = 0.0;
  for (int j = 0; j < 3; ++j)
    if (knots[j + 1] > knots[j]) value += integrand.integral(knots[j], knots[j + 1]);
  return value;
}

}  // namespace

MomentResult hybrid_moment_exchanged(const HybridMomentSpec& spec) {
  spec.validate();
  require(spec.m == 1, ErrorCode::InvalidArgument, "order exchange implemented for m = 1");
  const double top = 2.0 * spec.T + spec.G;
  const double kmax = std::max(half_exponent(spec.k), half_exponent(spec.ell));
  const double h = 0.75 * std::min(moment_spacing(top, kmax, spec.inner), 0.5 * spec.G);
  const double origin = spec.T - spec.G - 3.3 * h;
  const auto count = static_cast<std::size_t>(std::ceil((spec.T + 2.0 * spec.G + 7.0 * h) / h)) + 1;
  check_budget(static_cast<std::int64_t>(count),
               std::min(spec.inner.max_evals, spec.outer.max_evals));
  const auto abs2 = sample_abs2(origin, h, count, spec.inner.eval);
  const double fine = exchanged_on_grid(spec, abs2, origin, h);
  std::vector<double> coarse_abs2;
  for (std::size_t i = 0; i < abs2.size(); i += 2) coarse_abs2.push_back(abs2[i]);
  const double coarse = exchanged_on_grid(spec, coarse_abs2, origin, 2.0 * h);
  return {fine, std::abs(fine - coarse), static_cast<std::int64_t>(count)};
}

CumulativeMoment CumulativeMoment::build(double k, double t_start, double t_end,
                                         const QuadratureOptions& q, double step, double base) {
  q.validate();
  require(std::isfinite(k) && k > 0.0, ErrorCode::InvalidArgument, "k must be positive");
  require(std::isfinite(t_start) && std::isfinite(t_end) && t_start >= 0.0 && t_start < t_end,
          ErrorCode::InvalidArgument, "cumulative moment needs 0 <= t_start < t_end");
  const double h_max = step > 0.0 ? step : moment_spacing(t_end, k, q);
  const auto intervals = static_cast<std::size_t>(std::ceil((t_end - t_start) / h_max - 1e-9));
  const std::size_t count = std::max<std::size_t>(intervals, 3) + 1;
  const double h = step > 0.0 ? step : (t_end - t_start) / static_cast<double>(count - 1);
  check_budget(static_cast<std::int64_t>(count), q.max_evals);
  CumulativeMoment out;
  out.k_ = k;
  if (std::isnan(base)) base = moment_I(k, t_start, q).value;
  out.base_ = base;
  const auto abs2 = sample_abs2(t_start, h, count, q.eval);
  out.samples_ = UniformSamples(t_start, h, powers_of(abs2, k));
  return out;
}

}  // namespace zetalab
