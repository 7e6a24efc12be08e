#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "divisor_arith.hpp"
#include "moments.hpp"

namespace zetalab {

enum class Provenance { Exact, LeadingFixedRestFitted };

// Coefficients a_j (j = 0..k^2) of the polynomial P with
// I_k(T) = T P(log T) + E_k(T).
struct MainTermPolynomial {
  int k = 1;
  std::vector<double> coeffs;
  Provenance provenance = Provenance::Exact;
  // Fit diagnostics (zero for exact polynomials).
  double fit_rms_residual = 0.0;
  double fit_max_residual = 0.0;
  double condition_number = 0.0;
  std::vector<std::pair<double, double>> calibration;  // (T, I_2(T))

  int degree() const noexcept { return k * k; }
  double operator()(double y) const;

  // P_1(y) = y + 2 gamma - 1 - log(2 pi)
  static MainTermPolynomial p1();
  // Leading coefficient 1/(2 pi^2) only; lower coefficients zero.
  static MainTermPolynomial p4_leading();
};

// T * P(log T), T >= 2.
double eval_main_term(const MainTermPolynomial& poly, double T);

// Least-squares fit of the lower P_4 coefficients to sampled I_2(T) with the
// leading coefficient pinned. Throws IllConditioned when the normal
// equations of the (column-scaled) design exceed condition 1e12.
MainTermPolynomial fit_p4(double T_lo, double T_hi, int sample_count,
                          const QuadratureOptions& q);

enum class ErrorTermKind { E, E2, Estar };

struct ErrorTermSample {
  double T = 0.0;
  ErrorTermKind kind = ErrorTermKind::E;
  double value = 0.0;       // moment - main
  double moment = 0.0;      // I_1(T) or I_2(T)
  double main = 0.0;        // T P(log T), plus 2 pi Delta*(T/2pi) for Estar
};

ErrorTermSample error_term(ErrorTermKind kind, double T, const MainTermPolynomial& poly,
                           const QuadratureOptions& q, const DivisorTable* table);

// Error terms at many heights from one cumulative grid over [0, max T].
std::vector<ErrorTermSample> error_term_scan(ErrorTermKind kind,
                                             const std::vector<double>& heights,
                                             const MainTermPolynomial& poly,
                                             const QuadratureOptions& q,
                                             const DivisorTable* table);

// arsinh z = log(z + sqrt(z^2 + 1)), series below z = 1e-4.
double arsinh(double z);

// f(T, n) = 2T arsinh(sqrt(pi n / 2T)) + sqrt(2 pi n T + pi^2 n^2) - pi/4,
// 1 <= n <= T.
double f_phase(double T, std::int64_t n);

enum class KernelMode { Exact, Simplified };

// Sign in front of the oscillating series. Printed follows the formula as
// typeset; Matched is its negative, which is the sign that reproduces direct
// quadrature of J_1.
enum class SeriesSign { Matched, Printed };

struct ExplicitSeriesOptions {
  KernelMode kernel = KernelMode::Exact;
  SeriesSign sign = SeriesSign::Matched;
  std::optional<std::int64_t> n_max_override;
};

struct ExplicitSeriesResult {
  double T = 0.0;
  double G = 0.0;
  std::int64_t n_max = 0;
  double main_term = 0.0;       // digamma integral plus 2 pi Re g(i/2)
  double oscillating_sum = 0.0;
  double tail_estimate = 0.0;   // envelope bound on the omitted terms
  std::vector<double> terms;     // term n at index n-1
  std::vector<double> envelopes;
  KernelMode kernel = KernelMode::Exact;
  SeriesSign sign = SeriesSign::Matched;
};

// ceil(T G^-2 log T)
std::int64_t default_series_cutoff(double T, double G);

// (1/(sqrt(pi) G)) int [Re psi(1/2+it) + 2 gamma - log 2 pi] e^{-(T-t)^2/G^2} dt
// + 2 pi Re g(i/2)
double digamma_main_term(double T, double G);

ExplicitSeriesResult atkinson_series_J1(double T, double G, const ExplicitSeriesOptions& opts,
                                        const DivisorTable& table);

struct J1Residual {
  double direct = 0.0;  // smoothed_J(1, T, G)
  double direct_err = 0.0;
  double main_term = 0.0;
  double oscillating_sum = 0.0;
  double residual = 0.0;
  std::int64_t n_max = 0;
};

J1Residual j1_residual(double T, double G, const QuadratureOptions& q,
                       const DivisorTable& table, const ExplicitSeriesOptions& opts = {});

struct EstarIntegral {
  double value = 0.0;
  double est_err = 0.0;
  std::int64_t evals = 0;
};

// (2/(sqrt(pi) G^3)) int x E*(t+x) e^{-(x/G)^2} dx over |x| <= G log t.
EstarIntegral j1_from_estar(double t, double G, const DivisorTable& table,
                            const MainTermPolynomial& poly, const QuadratureOptions& q);

}  // namespace zetalab
