#include "jutila_meansq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "constants.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

void DiffMeanSquareSpec::validate() const {
  require(std::isfinite(T) && T >= 10.0, ErrorCode::InvalidArgument, "T must be >= 10");
  require(std::isfinite(H) && H > 0.0 && H <= 2.0 * T, ErrorCode::InvalidArgument,
          "H must lie in (0, 2T]");
  require(std::isfinite(U) && U > 0.0, ErrorCode::InvalidArgument, "U must be positive");
}

namespace {

// (x+U) P1(log(x+U)) - x P1(log x) without cancellation.
double main_increment(double x, double U) {
  const double c = constants::two_gamma_minus_one - constants::log_two_pi;
  return U * (std::log(x + U) + c) + x * std::log1p(U / x);
}

// abs2 holds |zeta|^2 at T + i h; U = m h.
double direct_on_grid(const DiffMeanSquareSpec& s, const std::vector<double>& abs2, double h,
                      std::size_t m) {
  const UniformSamples z(s.T, h, abs2);
  const std::size_t nx = abs2.size() - m;
  std::vector<double> sq(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = z.node(i);
    const double diff = (z.cumulative(i + m) - z.cumulative(i)) - main_increment(x, s.U);
    sq[i] = diff * diff;
  }
  const UniformSamples squares(s.T, h, std::move(sq));
  return squares.integral(s.T, s.T + s.H);
}

}  // namespace

MomentResult diff_meansq_direct(const DiffMeanSquareSpec& spec, const QuadratureOptions& q) {
  spec.validate();
  q.validate();
  const double top = spec.T + spec.H + spec.U;
  const double h_max = std::min(spec.U / 8.0, moment_spacing(top, 1.0, q));
  auto m = static_cast<std::size_t>(std::ceil(spec.U / h_max - 1e-9));
  m = std::max<std::size_t>(m, 8);
  if (m % 2 == 1) ++m;
  const double h = spec.U / static_cast<double>(m);
  // x nodes cover [T, T+H] with two spare cells for the coarse pass.
  auto nx = static_cast<std::size_t>(std::ceil(spec.H / h)) + 3;
  nx = std::max<std::size_t>(nx, 8);
  if (nx % 2 == 0) ++nx;
  const std::size_t count = nx + m;
  if (static_cast<std::int64_t>(count) > q.max_evals)
    fail(ErrorCode::BudgetExceeded, "difference mean square needs " + std::to_string(count) +
                                        " evaluations, budget " + std::to_string(q.max_evals));
  const auto abs2 = sample_abs2(spec.T, h, count, q.eval);
  const double fine = direct_on_grid(spec, abs2, h, m);
  std::vector<double> coarse;
  for (std::size_t i = 0; i < abs2.size(); i += 2) coarse.push_back(abs2[i]);
  const double rough = direct_on_grid(spec, coarse, 2.0 * h, m / 2);
  return {fine, std::abs(fine - rough), static_cast<std::int64_t>(count)};
}

JutilaSeries diff_meansq_series_terms(const DiffMeanSquareSpec& spec, const DivisorTable& table,
                                      std::optional<std::int64_t> cutoff_override,
                                      SeriesNormalization norm) {
  spec.validate();
  require(spec.U >= 2.0 && spec.U <= 0.5 * std::sqrt(spec.T), ErrorCode::InvalidArgument,
          "series side needs U in [2, sqrt(T)/2]");
  JutilaSeries out;
  out.cutoff = cutoff_override.value_or(
      static_cast<std::int64_t>(std::floor(spec.T / (2.0 * spec.U))));
  require(out.cutoff >= 1, ErrorCode::InvalidArgument, "series cutoff must be >= 1");
  if (out.cutoff > table.limit())
    fail(ErrorCode::TableTooSmall, "divisor table does not cover the series cutoff");
  using boost::math::quadrature::gauss_kronrod;
  const bool for_e = norm == SeriesNormalization::ForE;
  // |exp(i phi) - 1|^2 = 4 sin^2(phi/2) with phi = phase_scale * sqrt(n/x)
  const double half_phase = for_e ? 0.5 * spec.U * std::sqrt(constants::two_pi)
                                  : constants::pi * spec.U;
  const double constant = for_e ? 1.0 / std::sqrt(constants::two_pi)
                                : 1.0 / (4.0 * constants::pi * constants::pi);
  out.terms.assign(static_cast<std::size_t>(out.cutoff), 0.0);
  parallel_for(out.terms.size(), [&](std::size_t i) {
    const double n = static_cast<double>(i + 1);
    const double dn = table.d(static_cast<std::int64_t>(i + 1));
    auto f = [&](double x) {
      const double s = std::sin(half_phase * std::sqrt(n / x));
      return std::sqrt(x) * 4.0 * s * s;
    };
    const double integral =
        gauss_kronrod<double, 31>::integrate(f, spec.T, spec.T + spec.H, 15, 1e-12);
    out.terms[i] = constant * dn * dn * std::pow(n, -1.5) * integral;
  });
  out.value = pairwise_sum(out.terms);
  return out;
}

MomentResult diff_meansq(const DiffMeanSquareSpec& spec, DiffMethod method,
                         const QuadratureOptions& q, const DivisorTable* table,
                         SeriesNormalization norm) {
  if (method == DiffMethod::Direct) return diff_meansq_direct(spec, q);
  require(table != nullptr, ErrorCode::TableTooSmall, "series side needs a divisor table");
  const auto s = diff_meansq_series_terms(spec, *table, {}, norm);
  return {s.value, 0.0, s.cutoff};
}

double asymp_ratio_subrange(double T, double H, double U, const QuadratureOptions& q) {
  require(std::isfinite(U) && U >= 2.0 && U * U < T, ErrorCode::InvalidArgument,
          "ratio needs 2 <= U < sqrt(T)");
  const double direct = diff_meansq_direct({T, H, U}, q).value;
  const double lg = std::log(std::sqrt(T) / U);
  return direct / (H * U * lg * lg * lg);
}

double asymp_ratio(double T, double U, const QuadratureOptions& q) {
  return asymp_ratio_subrange(T, T, U, q);
}

}  // namespace zetalab
