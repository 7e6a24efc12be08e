#include "explicit_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "constants.hpp"
#include "digamma.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

namespace {

constexpr double kLeadingP4 = 1.0 / (2.0 * constants::pi * constants::pi);

// Closed form of f(T, n) without the n <= T restriction.
double phase(double T, double n) {
  const double z = std::sqrt(constants::pi * n / (2.0 * T));
  return 2.0 * T * arsinh(z) +
         std::sqrt(constants::two_pi * n * T + constants::pi * constants::pi * n * n) -
         0.25 * constants::pi;
}

double amplitude(double T, double n) {
  return 1.0 / std::sqrt(std::sqrt(T / (constants::two_pi * n) + 0.25) - 0.5);
}

}  // namespace

double MainTermPolynomial::operator()(double y) const {
  double out = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = out * y + *it;
  return out;
}

MainTermPolynomial MainTermPolynomial::p1() {
  MainTermPolynomial p;
  p.k = 1;
  p.coeffs = {constants::two_gamma_minus_one - constants::log_two_pi, 1.0};
  p.provenance = Provenance::Exact;
  return p;
}

MainTermPolynomial MainTermPolynomial::p4_leading() {
  MainTermPolynomial p;
  p.k = 2;
  p.coeffs = {0.0, 0.0, 0.0, 0.0, kLeadingP4};
  p.provenance = Provenance::LeadingFixedRestFitted;
  return p;
}

double eval_main_term(const MainTermPolynomial& poly, double T) {
  require(std::isfinite(T) && T >= 2.0, ErrorCode::InvalidArgument, "main term needs T >= 2");
  require(static_cast<int>(poly.coeffs.size()) == poly.degree() + 1, ErrorCode::InvalidArgument,
          "polynomial has the wrong number of coefficients");
  return T * poly(std::log(T));
}

MainTermPolynomial fit_p4(double T_lo, double T_hi, int sample_count,
                          const QuadratureOptions& q) {
  require(std::isfinite(T_lo) && T_lo >= 500.0 && T_hi > T_lo, ErrorCode::InvalidArgument,
          "fit_p4 needs 500 <= T_lo < T_hi");
  require(sample_count >= 20, ErrorCode::InvalidArgument, "fit_p4 needs >= 20 samples");
  const auto grid = CumulativeMoment::build(2.0, 0.0, T_hi, q);
  const auto rows = static_cast<Eigen::Index>(sample_count);

  Eigen::MatrixXd A(rows, 4);
  Eigen::VectorXd rhs(rows);
  MainTermPolynomial out = MainTermPolynomial::p4_leading();
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double T = T_lo + (T_hi - T_lo) * static_cast<double>(r) / static_cast<double>(rows - 1);
    const double L = std::log(T);
    const double I2 = grid.at(T);
    out.calibration.emplace_back(T, I2);
    // Rows divided by T: I_2/T - a_4 L^4 = a_0 + a_1 L + a_2 L^2 + a_3 L^3.
    rhs(r) = I2 / T - kLeadingP4 * L * L * L * L;
    double p = 1.0;
    for (int j = 0; j < 4; ++j, p *= L) A(r, j) = p;
  }
  const Eigen::VectorXd scale = A.colwise().norm().cwiseInverse();
  const Eigen::MatrixXd As = A * scale.asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) * sv(0) / (sv(sv.size() - 1) * sv(sv.size() - 1));
  out.condition_number = cond;
  if (!(cond <= 1e12))
    fail(ErrorCode::IllConditioned,
         "P4 fit normal equations have condition " + std::to_string(cond));
  const Eigen::VectorXd coef = As.colPivHouseholderQr().solve(rhs).cwiseProduct(scale);
  for (int j = 0; j < 4; ++j) out.coeffs[static_cast<std::size_t>(j)] = coef(j);

  double sq = 0.0;
  for (const auto& [T, I2] : out.calibration) {
    const double r = I2 - eval_main_term(out, T);
    sq += r * r;
    out.fit_max_residual = std::max(out.fit_max_residual, std::abs(r));
  }
  out.fit_rms_residual = std::sqrt(sq / static_cast<double>(out.calibration.size()));
  return out;
}

namespace {

int moment_index(ErrorTermKind kind) { return kind == ErrorTermKind::E2 ? 2 : 1; }

ErrorTermSample assemble(ErrorTermKind kind, double T, double moment,
                         const MainTermPolynomial& poly, const DivisorTable* table) {
  ErrorTermSample s;
  s.T = T;
  s.kind = kind;
  s.moment = moment;
  s.main = eval_main_term(poly, T);
  if (kind == ErrorTermKind::Estar) {
    require(table != nullptr, ErrorCode::TableTooSmall, "E* needs a divisor table");
    s.main += constants::two_pi * delta_star(T / constants::two_pi, *table);
  }
  s.value = s.moment - s.main;
  return s;
}

void check_kind(ErrorTermKind kind, const MainTermPolynomial& poly) {
  require(poly.k == moment_index(kind), ErrorCode::InvalidArgument,
          "polynomial does not match the error-term kind");
}

}  // namespace

ErrorTermSample error_term(ErrorTermKind kind, double T, const MainTermPolynomial& poly,
                           const QuadratureOptions& q, const DivisorTable* table) {
  check_kind(kind, poly);
  require(std::isfinite(T) && T >= 2.0, ErrorCode::InvalidArgument, "error term needs T >= 2");
  if (kind == ErrorTermKind::Estar) {
    require(table != nullptr, ErrorCode::TableTooSmall, "E* needs a divisor table");
    require(4.0 * T / constants::two_pi <= static_cast<double>(table->limit()),
            ErrorCode::TableTooSmall, "divisor table does not cover 4T/(2 pi)");
  }
  const double moment = moment_I(moment_index(kind), T, q).value;
  return assemble(kind, T, moment, poly, table);
}

std::vector<ErrorTermSample> error_term_scan(ErrorTermKind kind,
                                             const std::vector<double>& heights,
                                             const MainTermPolynomial& poly,
                                             const QuadratureOptions& q,
                                             const DivisorTable* table) {
  check_kind(kind, poly);
  require(!heights.empty(), ErrorCode::InvalidArgument, "no heights to scan");
  const double top = *std::max_element(heights.begin(), heights.end());
  const double bottom = *std::min_element(heights.begin(), heights.end());
  require(bottom >= 2.0, ErrorCode::InvalidArgument, "error term needs T >= 2");
  if (kind == ErrorTermKind::Estar)
    require(table != nullptr && 4.0 * top / constants::two_pi <= static_cast<double>(table->limit()),
            ErrorCode::TableTooSmall, "divisor table does not cover 4T/(2 pi)");
  const auto grid = CumulativeMoment::build(moment_index(kind), 0.0, top, q);
  std::vector<ErrorTermSample> out;
  out.reserve(heights.size());
  for (double T : heights) out.push_back(assemble(kind, T, grid.at(T), poly, table));
  return out;
}

double arsinh(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return z * (1.0 - z2 / 6.0 + 3.0 * z2 * z2 / 40.0);
  }
  if (z < 0.0) return -arsinh(-z);
  return std::log(z + std::sqrt(z * z + 1.0));
}

double f_phase(double T, std::int64_t n) {
  require(std::isfinite(T) && T > 0.0, ErrorCode::InvalidArgument, "f(T, n) needs T > 0");
  require(n >= 1, ErrorCode::InvalidArgument, "f(T, n) needs n >= 1");
  if (static_cast<double>(n) > T) fail(ErrorCode::DomainError, "f(T, n) requires n <= T");
  return phase(T, static_cast<double>(n));
}

std::int64_t default_series_cutoff(double T, double G) {
  return static_cast<std::int64_t>(std::ceil(T / (G * G) * std::log(T)));
}

double digamma_main_term(double T, double G) {
  using boost::math::quadrature::gauss_kronrod;
  const double shift = 2.0 * constants::euler_gamma - constants::log_two_pi;
  auto f = [=](double u) {
    const double re_psi = digamma({0.5, T + G * u}).real();
    return (re_psi + shift) * std::exp(-u * u);
  };
  double err = 0.0;
  const double smooth = gauss_kronrod<double, 61>::integrate(f, -9.0, 9.0, 12, 1e-14, &err) /
                        constants::sqrt_pi;
  // 2 pi Re g(i/2) with g(t) = e^{-(T-t)^2/G^2}/(sqrt(pi) G)
  const double g_half = std::exp(-(T * T - 0.25) / (G * G)) * std::cos(T / (G * G)) /
                        (constants::sqrt_pi * G);
  return smooth + constants::two_pi * g_half;
}

ExplicitSeriesResult atkinson_series_J1(double T, double G, const ExplicitSeriesOptions& opts,
                                        const DivisorTable& table) {
  require(std::isfinite(T) && T >= 10.0, ErrorCode::InvalidArgument, "series needs T >= 10");
  if (!(G >= 2.0 && G <= std::pow(T, 0.9)))
    fail(ErrorCode::DomainError, "G must lie in [2, T^0.9]");
  ExplicitSeriesResult r;
  r.T = T;
  r.G = G;
  r.kernel = opts.kernel;
  r.sign = opts.sign;
  r.n_max = opts.n_max_override.value_or(default_series_cutoff(T, G));
  require(r.n_max >= 1, ErrorCode::InvalidArgument, "series cutoff must be >= 1");
  if (r.n_max > table.limit())
    fail(ErrorCode::TableTooSmall, "divisor table does not cover n_max = " +
                                       std::to_string(r.n_max));

  const double sign = opts.sign == SeriesSign::Matched ? -1.0 : 1.0;
  const auto count = static_cast<std::size_t>(r.n_max);
  r.terms.assign(count, 0.0);
  r.envelopes.assign(count, 0.0);
  parallel_for(count, [&](std::size_t i) {
    const double n = static_cast<double>(i + 1);
    const double base = constants::sqrt_two * table.d(static_cast<std::int64_t>(i + 1)) /
                        std::sqrt(n);
    const double amp = amplitude(T, n);
    double weight = 0.0;
    if (opts.kernel == KernelMode::Exact) {
      const double a = arsinh(std::sqrt(constants::pi * n / (2.0 * T)));
      weight = amp * std::exp(-G * G * a * a);
    } else {
      weight = std::pow(T / (constants::two_pi * n), -0.25) *
               std::exp(-constants::pi * G * G * n / (2.0 * T));
    }
    const double alternating = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^n
    r.terms[i] = sign * alternating * base * weight * std::sin(phase(T, n));
    r.envelopes[i] = base * amp;
  });
  r.oscillating_sum = pairwise_sum(r.terms);

  // Omitted terms, bounded with d(n) <= 2 sqrt(n).
  double tail = 0.0;
  for (double n = static_cast<double>(r.n_max) + 1.0;; n += 1.0) {
    const double a = arsinh(std::sqrt(constants::pi * n / (2.0 * T)));
    const double bound = 2.0 * constants::sqrt_two * amplitude(T, n) * std::exp(-G * G * a * a);
    tail += bound;
    if (bound < 1e-17 * tail || bound < 1e-300) break;
  }
  r.tail_estimate = tail;
  r.main_term = digamma_main_term(T, G);
  return r;
}

J1Residual j1_residual(double T, double G, const QuadratureOptions& q,
                       const DivisorTable& table, const ExplicitSeriesOptions& opts) {
  const auto series = atkinson_series_J1(T, G, opts, table);
  const auto direct = smoothed_J(1.0, T, G, q);
  J1Residual r;
  r.direct = direct.value;
  r.direct_err = direct.est_err;
  r.main_term = series.main_term;
  r.oscillating_sum = series.oscillating_sum;
  r.n_max = series.n_max;
  r.residual = r.direct - r.main_term - r.oscillating_sum;
  return r;
}

EstarIntegral j1_from_estar(double t, double G, const DivisorTable& table,
                            const MainTermPolynomial& poly, const QuadratureOptions& q) {
  require(std::isfinite(t) && t >= 10.0, ErrorCode::InvalidArgument, "needs t >= 10");
  require(poly.k == 1, ErrorCode::InvalidArgument, "E* uses the k = 1 polynomial");
  if (!(G >= 1.0 && G <= std::cbrt(t) * (1.0 + 1e-12)))
    fail(ErrorCode::DomainError, "G must lie in [1, t^(1/3)]");
  const double reach = G * std::log(t);
  const double top = t + reach;
  if (2.0 * top / constants::pi > static_cast<double>(table.limit()))
    fail(ErrorCode::TableTooSmall, "divisor table does not cover 4(t + G log t)/(2 pi)");

  // Symmetric grid with t at the middle node.
  auto half = static_cast<std::size_t>(std::ceil(reach / moment_spacing(top, 1.0, q)));
  half = std::max<std::size_t>(half, 8);
  if (half % 2 == 1) ++half;
  const double h = reach / static_cast<double>(half);
  const auto grid = CumulativeMoment::build(1.0, t - reach, top, q, h);
  const auto& s = grid.samples();
  require(s.size() == 2 * half + 1, ErrorCode::InvalidArgument, "unexpected grid size");

  // E*(u) = I_1(u) - u P(log u) - 2 pi Delta*(u/2pi)
  //       = I_1(u) - pi A(2u/pi) - [u P(log u) - u(log(u/2pi) + 2 gamma - 1)],
  // A(m) the alternating divisor sum. I_1(t) drops out against the odd weight.
  auto smooth_excess = [&](double u) {
    return u * poly(std::log(u)) -
           u * (std::log(u / constants::two_pi) + constants::two_gamma_minus_one);
  };
  const double at_t = s.cumulative(half);
  std::vector<double> g(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s.node(i) - t;
    const double w = std::exp(-(x / G) * (x / G));
    g[i] = x * (s.cumulative(i) - at_t - smooth_excess(s.node(i))) * w;
  }
  const UniformSamples smooth(t - reach, h, std::move(g));
  const double smooth_part = smooth.total();
  const double smooth_err = std::abs(smooth_part - smooth.coarsened().total());

  // Step part: -pi int x A(floor(2(t+x)/pi)) e^{-(x/G)^2} dx, exact on each
  // constant piece via the antiderivative -(G^2/2) e^{-x^2/G^2}.
  auto W = [G](double x) { return -0.5 * G * G * std::exp(-(x / G) * (x / G)); };
  const auto m_lo = static_cast<std::int64_t>(std::floor(2.0 * (t - reach) / constants::pi));
  const auto m_hi = static_cast<std::int64_t>(std::floor(2.0 * top / constants::pi));
  std::vector<double> pieces;
  double lo = -reach;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double hi = std::min(reach, constants::pi * static_cast<double>(m + 1) / 2.0 - t);
    if (hi > lo)
      pieces.push_back(static_cast<double>(table.alternating_sum(m)) * (W(hi) - W(lo)));
    lo = std::max(lo, hi);
  }
  const double step_part = -constants::pi * pairwise_sum(pieces);

  const double norm = 2.0 / (constants::sqrt_pi * G * G * G);
  return {norm * (smooth_part + step_part), norm * smooth_err,
          static_cast<std::int64_t>(s.size())};
}

}  // namespace zetalab
