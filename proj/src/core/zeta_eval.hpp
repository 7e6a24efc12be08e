#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace zetalab {

enum class EvalMethod { EulerMaclaurin, RiemannSiegel, Auto };
enum class Accumulation { F64, DoubleDouble };

struct EvalPolicy {
  EvalMethod method = EvalMethod::Auto;
  double target_abs_err = 1e-6;
  // Number of Riemann-Siegel correction terms beyond C0, in [0, 4].
  int rs_correction_order = 4;
  // Main-sum accumulation; double-double is always used above t = 1e6.
  Accumulation accumulation = Accumulation::F64;

  void validate() const;
};

// One evaluation point on the critical line.
struct CriticalSample {
  double t = 0.0;
  std::complex<double> value;
  double abs2k = 0.0;      // |zeta(1/2+it)|^(2k)
  double err_bound = 0.0;  // bound on |true value - value|
  EvalMethod method = EvalMethod::Auto;
};

// zeta(1/2 + it) for t >= 0; abs2k is filled for the requested k.
CriticalSample eval_zeta_half(double t, const EvalPolicy& policy, double k = 1.0);

// Uniform grid over [t0, t1] with spacing at most
// spacing_factor * 2*pi / log(t1 / 2*pi) (and at most 0.25).
std::vector<CriticalSample> abs_power_grid(double t0, double t1, double k,
                                           const EvalPolicy& policy,
                                           std::size_t max_points,
                                           double spacing_factor = 0.25);

// Spacing rule tied to the mean gap between zeros near height t1.
double zero_gap_spacing(double t1, double spacing_factor = 0.25);

// x^k for x >= 0 with exact repeated multiplication for integral k, so that
// power(x, 2) == power(x, 1) * power(x, 1) bitwise.
double nonneg_power(double x, double k);

namespace detail {

struct ZetaEstimate {
  std::complex<double> value;
  double err_bound = 0.0;
};

// Euler-Maclaurin summation for general complex s (Re s > -20, s != 1).
ZetaEstimate zeta_euler_maclaurin(std::complex<double> s, double target_abs_err,
                                  Accumulation acc = Accumulation::F64);

double riemann_siegel_theta(double t);

struct HardyZ {
  double z = 0.0;
  double err_bound = 0.0;
};

// Hardy's Z(t) via the Riemann-Siegel formula with corrections C0..C_order.
HardyZ riemann_siegel_z(double t, int order, Accumulation acc);

// Remainder bound after C0..C_order (Gabcke's constants; doubled below
// t = 200 where they are not proven).
double rs_remainder_bound(double t, int order);

// k-th derivative of cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), 0 <= k <= 12.
double rs_psi_derivative(double p, int k);

// |zeta(1/2 + it)|^2 for any real t (uses the reflection |zeta| even in t).
double abs2_critical(double t, const EvalPolicy& policy);

}  // namespace detail
}  // namespace zetalab
