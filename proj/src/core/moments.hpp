#pragma once

#include <cstdint>
#include <functional>

#include "sampling.hpp"
#include "zeta_eval.hpp"

namespace zetalab {

enum class QuadPolicy { Uniform, Adaptive };

// How integrals of |zeta|^(2k)-type integrands are discretised. The interval
// is supplied by each operation.
struct QuadratureOptions {
  QuadPolicy policy = QuadPolicy::Uniform;
  double target_rel_err = 1e-6;
  std::int64_t max_evals = 20'000'000;
  // Grid spacing is spacing_factor * 2 pi / log(t/2pi), further divided by
  // the power k of |zeta|^2 so the doubled bandwidth of higher powers is
  // resolved.
  double spacing_factor = 0.25;
  EvalPolicy eval;

  void validate() const;
};

struct QuadratureSpec {
  double a = 0.0;
  double b = 1.0;
  QuadratureOptions options;

  void validate() const;
};

struct MomentResult {
  double value = 0.0;
  double est_err = 0.0;
  std::int64_t evals = 0;
};

// Integrand of t and |zeta(1/2+it)|^2.
using CriticalIntegrand = std::function<double(double t, double abs2)>;

struct CriticalIntegral {
  MomentResult result;
  double max_abs2 = 0.0;
};

// Integrates integrand(t, |zeta(1/2+it)|^2) over [spec.a, spec.b]. The
// estimate is the fourth-order cumulative rule; est_err is the difference to
// the same rule at doubled spacing. k_scale divides the base spacing.
CriticalIntegral integrate_critical(const QuadratureSpec& spec, double k_scale,
                                    const CriticalIntegrand& integrand);

// I_k(T) = int_0^T |zeta(1/2+it)|^(2k) dt
MomentResult moment_I(double k, double T, const QuadratureOptions& q);

// J_k(t, G) = (1/(sqrt(pi) G)) int |zeta(1/2+it+iu)|^(2k) exp(-(u/G)^2) du,
// truncated at |u| <= G log t.
MomentResult smoothed_J(double k, double t, double G, const QuadratureOptions& q);

// int_{t-G}^{t+G} |zeta(1/2+ix)|^ell dx
MomentResult interval_moment(int ell, double t, double G, const QuadratureOptions& q);

struct HybridMomentSpec {
  int k = 2;    // outer exponent of |zeta|
  int ell = 2;  // inner exponent of |zeta|
  int m = 1;    // power of the inner integral
  double T = 1000.0;
  double G = 10.0;
  QuadratureOptions outer;
  QuadratureOptions inner;
  // Accept even exponents outside {2, 4} (including k = 0).
  bool allow_any_even = false;

  void validate() const;
};

// int_T^{2T} |zeta(1/2+it)|^k ( int_{t-G}^{t+G} |zeta(1/2+ix)|^ell dx )^m dt
// using one shared inner grid over [T-G, 2T+G].
MomentResult hybrid_moment(const HybridMomentSpec& spec);

// The m = 1 hybrid moment with the order of integration exchanged:
// int_{T-G}^{2T+G} |zeta(x)|^ell int_{max(T,x-G)}^{min(2T,x+G)} |zeta(t)|^k dt dx,
// on a grid independent of the one used by hybrid_moment.
MomentResult hybrid_moment_exchanged(const HybridMomentSpec& spec);

// Running integral I_k(x) on a uniform grid over [t_start, t_end].
class CumulativeMoment {
 public:
  // base is I_k(t_start); when t_start > 0 and base is NaN it is computed
  // with moment_I. step <= 0 selects the spacing rule.
  static CumulativeMoment build(double k, double t_start, double t_end,
                                const QuadratureOptions& q, double step = 0.0,
                                double base = 0.0);

  double at(double x) const { return base_ + samples_.integral(samples_.origin(), x); }
  double integral(double a, double b) const { return samples_.integral(a, b); }
  const UniformSamples& samples() const noexcept { return samples_; }
  double k() const noexcept { return k_; }

 private:
  double k_ = 1.0;
  double base_ = 0.0;
  UniformSamples samples_;
};

// Spacing used for |zeta|^(2k) integrands up to height t_max.
double moment_spacing(double t_max, double k, const QuadratureOptions& q);

}  // namespace zetalab
