#include "zeta_eval.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "constants.hpp"
#include "double_double.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Heights below this always use Euler-Maclaurin.
constexpr double kRiemannSiegelMinHeight = 30.0;
// Largest height Euler-Maclaurin is allowed to take on as a fallback.
constexpr double kEulerMaclaurinMaxHeight = 2.0e5;
constexpr double kDoubleDoubleHeight = 1.0e6;

// B_{2j} / (2j)! for j = 1..16.
const std::array<double, 16>& bernoulli_over_factorial() {
  static const std::array<double, 16> table = [] {
    const std::array<std::pair<double, double>, 16> b = {{
        {1.0, 6.0},
        {-1.0, 30.0},
        {1.0, 42.0},
        {-1.0, 30.0},
        {5.0, 66.0},
        {-691.0, 2730.0},
        {7.0, 6.0},
        {-3617.0, 510.0},
        {43867.0, 798.0},
        {-174611.0, 330.0},
        {854513.0, 138.0},
        {-236364091.0, 2730.0},
        {8553103.0, 6.0},
        {-23749461029.0, 870.0},
        {8615841276005.0, 14322.0},
        {-7709321041217.0, 510.0},
    }};
    std::array<double, 16> out{};
    long double fact = 1.0L;
    for (int j = 1; j <= 16; ++j) {
      fact *= static_cast<long double>(2 * j - 1) * (2 * j);
      out[j - 1] = static_cast<double>(
          static_cast<long double>(b[j - 1].first) / b[j - 1].second / fact);
    }
    return out;
  }();
  return table;
}

// Taylor coefficients of Psi(p) = cos(2pi(p^2-p-1/16)) / cos(2pi p) around
// p = 1/2, obtained once from the Cauchy integral on |z - 1/2| = 1. Psi is
// entire and symmetric under p -> 1 - p, so only even powers survive.
constexpr int kPsiTerms = 72;
constexpr int kPsiMaxDerivative = 12;

struct PsiTables {
  // derivative[k][j] multiplies x^j in the k-th derivative, x = p - 1/2.
  std::array<std::array<double, kPsiTerms>, kPsiMaxDerivative + 1> derivative{};
};

const PsiTables& psi_tables() {
  static const PsiTables tables = [] {
    constexpr int samples = 256;
    constexpr double radius = 1.0;
    std::array<long double, kPsiTerms> taylor{};
    std::array<cplx, samples> psi{};
    for (int m = 0; m < samples; ++m) {
      const double phi = constants::two_pi * m / samples;
      const cplx z = 0.5 + radius * cplx(std::cos(phi), std::sin(phi));
      const cplx num =
          std::cos(constants::two_pi * (z * z - z - 1.0 / 16.0));
      psi[m] = num / std::cos(constants::two_pi * z);
    }
    for (int j = 0; j < kPsiTerms; j += 2) {
      long double acc = 0.0L;
      for (int m = 0; m < samples; ++m) {
        const double phi = constants::two_pi * m / samples;
        acc += psi[m].real() * std::cos(j * phi) +
               psi[m].imag() * std::sin(j * phi);
      }
      taylor[j] = acc / samples / std::pow(radius, j);
    }
    PsiTables t;
    for (int k = 0; k <= kPsiMaxDerivative; ++k) {
      for (int j = 0; j + k < kPsiTerms; ++j) {
        long double falling = 1.0L;
        for (int i = 0; i < k; ++i) falling *= (j + k - i);
        t.derivative[k][j] = static_cast<double>(taylor[j + k] * falling);
      }
    }
    return t;
  }();
  return tables;
}

// Gabcke's remainder constants d_K for |R_K(t)| <= d_K tau^{-(2K+3)/4}.
constexpr std::array<double, 5> kGabcke = {0.127, 0.053, 0.011, 0.031, 0.017};

template <class Acc>
double rs_main_sum(double t, double theta, long n_terms) {
  Acc acc{};
  for (long n = 1; n <= n_terms; ++n) {
    const double dn = static_cast<double>(n);
    acc += std::cos(theta - t * std::log(dn)) / std::sqrt(dn);
  }
  if constexpr (std::is_same_v<Acc, DoubleDouble>) {
    return 2.0 * acc.value();
  } else {
    return 2.0 * acc;
  }
}

}  // namespace

void EvalPolicy::validate() const {
  require(std::isfinite(target_abs_err) && target_abs_err > 0.0,
          ErrorCode::InvalidArgument, "target_abs_err must be positive");
  require(rs_correction_order >= 0 && rs_correction_order <= 4,
          ErrorCode::InvalidArgument, "rs_correction_order must lie in [0, 4]");
}

double nonneg_power(double x, double k) {
  const double r = std::round(k);
  if (r == k && r >= 0.0 && r <= 64.0) {
    double out = 1.0;
    for (int i = 0; i < static_cast<int>(r); ++i) out *= x;
    return out;
  }
  return std::pow(x, k);
}

double zero_gap_spacing(double t1, double spacing_factor) {
  const double lg = std::log(std::max(t1, constants::two_pi) / constants::two_pi);
  const double rule = spacing_factor * constants::two_pi / std::max(lg, 1.0);
  return std::min(rule, 0.25);
}

namespace detail {

ZetaEstimate zeta_euler_maclaurin(cplx s, double target_abs_err, Accumulation acc) {
  const auto& b = bernoulli_over_factorial();
  const double abs_s = std::abs(s);
  long n_cut = std::max<long>(10, static_cast<long>(std::ceil((abs_s + 30.0) / constants::pi)));
  for (int attempt = 0; attempt < 6; ++attempt, n_cut *= 2) {
    const double nd = static_cast<double>(n_cut);
    cplx head;
    if (acc == Accumulation::DoubleDouble) {
      DoubleDouble re, im;
      for (long n = 1; n < n_cut; ++n) {
        const cplx term = std::exp(-s * std::log(static_cast<double>(n)));
        re += term.real();
        im += term.imag();
      }
      head = {re.value(), im.value()};
    } else {
      for (long n = 1; n < n_cut; ++n)
        head += std::exp(-s * std::log(static_cast<double>(n)));
    }
    const cplx n_pow = std::exp(-s * std::log(nd));  // N^{-s}
    cplx sum = head + nd * n_pow / (s - 1.0) + 0.5 * n_pow;

    // Correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) N^{-s-2j+1}.
    cplx rising = s;
    cplx power = n_pow / nd;
    double bound = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 15; ++j) {
      const cplx term = b[j - 1] * rising * power;
      sum += term;
      rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
      power /= nd * nd;
      const cplx next = b[j] * rising * power;
      const double sigma_shift = s.real() + 2.0 * j + 1.0;
      bound = std::abs(next) * std::abs(s + static_cast<double>(2 * j + 1)) /
              std::max(sigma_shift, 1e-3);
      if (bound < 1e-3 * target_abs_err) break;
    }
    // Phase errors of n^{-it} grow like |t| log n; the head sum has size ~ sum n^{-sigma}.
    const double head_size = s.real() == 1.0 ? std::log(nd) + 1.0
                                             : (std::pow(nd, 1.0 - s.real()) - 1.0) /
                                                       (1.0 - s.real()) + 1.0;
    const double rounding =
        4.0 * kEps * (1.0 + std::abs(s.imag()) * std::log(nd)) * std::abs(head_size) +
        4.0 * kEps * std::abs(sum);
    const double total = bound + rounding;
    if (total <= target_abs_err || attempt == 5) {
      if (s.imag() == 0.0) sum.imag(0.0);
      return {sum, total};
    }
  }
  return {};  // unreachable
}

double riemann_siegel_theta(double t) {
  const double inv = 1.0 / t;
  const double inv2 = inv * inv;
  const double series =
      inv / 48.0 *
      (1.0 + inv2 * (7.0 / 120.0 + inv2 * (31.0 / 1680.0 + inv2 * (127.0 / 8960.0))));
  return 0.5 * t * std::log(t / constants::two_pi) - 0.5 * t - constants::pi / 8.0 + series;
}

double rs_psi_derivative(double p, int k) {
  const auto& row = psi_tables().derivative[k];
  const double x = p - 0.5;
  double acc = 0.0;
  for (int j = kPsiTerms - 1 - k; j >= 0; --j) acc = acc * x + row[j];
  return acc;
}

double rs_remainder_bound(double t, int order) {
  const double tau = t / constants::two_pi;
  const double bound = kGabcke[order] * std::pow(tau, -(2.0 * order + 3.0) / 4.0);
  return t < 200.0 ? 2.0 * bound : bound;
}

HardyZ riemann_siegel_z(double t, int order, Accumulation acc) {
  using constants::pi;
  const double tau = t / constants::two_pi;
  const double a = std::sqrt(tau);
  const long n_terms = static_cast<long>(std::floor(a));
  const double p = a - static_cast<double>(n_terms);
  const double theta = riemann_siegel_theta(t);

  const bool use_dd = acc == Accumulation::DoubleDouble || t > kDoubleDoubleHeight;
  const double main = use_dd ? rs_main_sum<DoubleDouble>(t, theta, n_terms)
                             : rs_main_sum<double>(t, theta, n_terms);

  auto d = [p](int k) { return rs_psi_derivative(p, k); };
  const double pi2 = pi * pi;
  const double pi4 = pi2 * pi2;
  const double pi6 = pi4 * pi2;
  const double pi8 = pi4 * pi4;
  std::array<double, 5> c{};
  c[0] = d(0);
  if (order >= 1) c[1] = -d(3) / (96.0 * pi2);
  if (order >= 2) c[2] = d(2) / (64.0 * pi2) + d(6) / (18432.0 * pi4);
  if (order >= 3)
    c[3] = -d(1) / (64.0 * pi2) - d(5) / (3840.0 * pi4) - d(9) / (5308416.0 * pi6);
  if (order >= 4)
    c[4] = d(0) / (128.0 * pi2) + 19.0 * d(4) / (24576.0 * pi4) +
           11.0 * d(8) / (5898240.0 * pi6) + d(12) / (2038431744.0 * pi8);

  const double inv_sqrt_tau = 1.0 / a;
  double corr = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= order; ++k) {
    corr += c[k] * scale;
    scale *= inv_sqrt_tau;
  }
  const double sign = (n_terms % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
  const double remainder = sign * std::pow(tau, -0.25) * corr;

  const double phase_scale = std::abs(theta) + t * std::log(static_cast<double>(n_terms) + 1.0);
  const double rounding = 8.0 * kEps * (phase_scale + 1.0) * 2.0 * std::sqrt(a + 1.0) * a;
  return {main + remainder, rs_remainder_bound(t, order) + rounding};
}

double abs2_critical(double t, const EvalPolicy& policy) {
  return std::norm(eval_zeta_half(std::abs(t), policy).value);
}

}  // namespace detail

CriticalSample eval_zeta_half(double t, const EvalPolicy& policy, double k) {
  policy.validate();
  require(std::isfinite(t) && t >= 0.0, ErrorCode::InvalidArgument,
          "eval_zeta_half requires finite t >= 0");
  require(std::isfinite(k) && k > 0.0, ErrorCode::InvalidArgument, "k must be positive");

  const double target = policy.target_abs_err;
  const cplx s(0.5, t);
  CriticalSample out;
  out.t = t;

  auto use_em = [&] {
    const auto est = detail::zeta_euler_maclaurin(s, target, policy.accumulation);
    if (est.err_bound > target)
      fail(ErrorCode::UnsupportedHeight,
           "Euler-Maclaurin cannot reach target at t = " + std::to_string(t));
    out.value = est.value;
    out.err_bound = est.err_bound;
    out.method = EvalMethod::EulerMaclaurin;
  };
  auto use_rs = [&](const detail::HardyZ& z) {
    const double theta = detail::riemann_siegel_theta(t);
    out.value = std::polar(1.0, -theta) * z.z;
    out.err_bound = z.err_bound;
    out.method = EvalMethod::RiemannSiegel;
  };

  switch (policy.method) {
    case EvalMethod::EulerMaclaurin:
      if (t > kEulerMaclaurinMaxHeight)
        fail(ErrorCode::UnsupportedHeight, "Euler-Maclaurin capped at t = 2e5");
      use_em();
      break;
    case EvalMethod::RiemannSiegel: {
      if (t < constants::two_pi)
        fail(ErrorCode::UnsupportedHeight, "Riemann-Siegel needs t >= 2*pi");
      const auto z = detail::riemann_siegel_z(t, policy.rs_correction_order, policy.accumulation);
      if (z.err_bound > target)
        fail(ErrorCode::UnsupportedHeight,
             "Riemann-Siegel order " + std::to_string(policy.rs_correction_order) +
                 " cannot reach target at t = " + std::to_string(t));
      use_rs(z);
      break;
    }
    case EvalMethod::Auto: {
      if (t < kRiemannSiegelMinHeight) {
        use_em();
        break;
      }
      const auto z = detail::riemann_siegel_z(t, policy.rs_correction_order, policy.accumulation);
      if (z.err_bound <= target) {
        use_rs(z);
      } else if (t <= kEulerMaclaurinMaxHeight) {
        use_em();
      } else {
        fail(ErrorCode::UnsupportedHeight,
             "no method reaches the target at t = " + std::to_string(t));
      }
      break;
    }
  }
  out.abs2k = nonneg_power(std::norm(out.value), k);
  return out;
}

std::vector<CriticalSample> abs_power_grid(double t0, double t1, double k,
                                           const EvalPolicy& policy, std::size_t max_points,
                                           double spacing_factor) {
  require(std::isfinite(t0) && std::isfinite(t1) && t0 >= 0.0 && t0 < t1,
          ErrorCode::InvalidArgument, "abs_power_grid requires 0 <= t0 < t1");
  require(spacing_factor > 0.0 && spacing_factor <= 0.25, ErrorCode::InvalidArgument,
          "spacing factor must lie in (0, 1/4]");
  policy.validate();
  const double h_max = zero_gap_spacing(t1, spacing_factor);
  const double intervals = std::ceil((t1 - t0) / h_max);
  const std::size_t n = static_cast<std::size_t>(intervals) + 1;
  if (n > max_points)
    fail(ErrorCode::BudgetExceeded, "spacing rule needs " + std::to_string(n) + " points, budget " +
                                        std::to_string(max_points));
  const double h = (t1 - t0) / intervals;
  std::vector<CriticalSample> out(n);
  parallel_for(n, [&](std::size_t i) {
    const double t = (i + 1 == n) ? t1 : t0 + h * static_cast<double>(i);
    out[i] = eval_zeta_half(t, policy, k);
  });
  return out;
}

}  // namespace zetalab
