#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "moments.hpp"

namespace zetalab {

struct MellinSpec {
  double sigma = 2.0;
  double t = 0.0;
  double X_trunc = 1000.0;
  // Growth exponent tau in |zeta(1/2+ix)|^4 <= B x^tau used for the tail.
  double tail_exponent = 0.55;

  void validate() const;
};

struct MellinResult {
  std::complex<double> value;
  double modulus = 0.0;
  double est_err = 0.0;     // quadrature estimate plus tail bound
  double tail_bound = 0.0;  // B X^{1+tau-sigma} / (sigma-1-tau)
  double tail_constant = 0.0;
  std::int64_t evals = 0;
};

// int_1^X |zeta(1/2+ix)|^4 x^{-s} dx, s = sigma + it.
MellinResult z2_eval(const MellinSpec& spec, const QuadratureOptions& q);

struct MellinScanPoint {
  double t = 0.0;
  double abs2 = 0.0;     // |Z_2(sigma+it)|^2
  double partial = 0.0;  // int_{T_lo}^t |Z_2(sigma+iu)|^2 du
};

struct MellinScan {
  double sigma = 0.0;
  double rho = 1.5;
  // (4 rho + 4 - 8 sigma) / (3 rho - 1), reported only.
  double theorem_exponent = 0.0;
  // Least-squares slope of log partial against log t.
  double fitted_slope = 0.0;
  double tail_exponent = 0.0;
  std::vector<MellinScanPoint> points;
};

// steps + 1 equally spaced heights in [T_lo, T_hi], all sharing one grid.
MellinScan z2_meansq_scan(double sigma, double T_lo, double T_hi, int steps,
                          double X_trunc, double tail_exponent, const QuadratureOptions& q,
                          double rho = 1.5);

// Slope of log max_{block} |zeta(1/2+ix)|^4 against log x over log-spaced
// blocks of [x_lo, x_hi].
double fit_tail_exponent(double x_lo, double x_hi, const QuadratureOptions& q, int blocks = 24);

}  // namespace zetalab
