#include "mellin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "constants.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

void MellinSpec::validate() const {
  require(std::isfinite(sigma) && std::isfinite(t), ErrorCode::InvalidArgument,
          "s must be finite");
  if (!(sigma > 1.0)) fail(ErrorCode::DomainError, "Z_2(s) is only evaluated for sigma > 1");
  require(std::isfinite(X_trunc) && X_trunc >= 10.0, ErrorCode::InvalidArgument,
          "X_trunc must be >= 10");
  require(std::isfinite(tail_exponent) && tail_exponent >= 0.0, ErrorCode::InvalidArgument,
          "tail_exponent must be >= 0");
  if (!(sigma > 1.0 + tail_exponent))
    fail(ErrorCode::TailDiverges, "tail bound needs sigma > 1 + tail_exponent");
}

namespace {

struct FourthPowerGrid {
  double h = 0.0;
  std::vector<double> z4;  // |zeta(1/2+ix)|^4 at x = 1 + i h
};

FourthPowerGrid fourth_power_grid(double X, double max_abs_t, const QuadratureOptions& q) {
  q.validate();
  const double h_max = std::min(moment_spacing(X, 2.0, q),
                                constants::two_pi / (16.0 * std::max(1.0, max_abs_t)));
  auto cells = static_cast<std::size_t>(std::ceil((X - 1.0) / h_max));
  cells = std::max<std::size_t>(cells, 8);
  if (cells % 2 == 1) ++cells;
  if (static_cast<std::int64_t>(cells + 1) > q.max_evals)
    fail(ErrorCode::BudgetExceeded, "Mellin grid needs " + std::to_string(cells + 1) +
                                        " evaluations, budget " + std::to_string(q.max_evals));
  FourthPowerGrid g;
  g.h = (X - 1.0) / static_cast<double>(cells);
  g.z4 = powers_of(sample_abs2(1.0, g.h, cells + 1, q.eval), 2.0);
  return g;
}

struct Transform {
  std::complex<double> fine;
  std::complex<double> coarse;
};

Transform transform(const FourthPowerGrid& g, double sigma, double t) {
  const std::size_t n = g.z4.size();
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 1.0 + g.h * static_cast<double>(i);
    const double lx = std::log(x);
    const double w = g.z4[i] * std::exp(-sigma * lx);
    re[i] = w * std::cos(t * lx);
    im[i] = -w * std::sin(t * lx);
  }
  const UniformSamples R(1.0, g.h, std::move(re));
  const UniformSamples I(1.0, g.h, std::move(im));
  return {{R.total(), I.total()}, {R.coarsened().total(), I.coarsened().total()}};
}

double tail_constant(const FourthPowerGrid& g, double X, double tau) {
  const double from = std::min(100.0, 0.5 * X);
  double B = 0.0;
  for (std::size_t i = 0; i < g.z4.size(); ++i) {
    const double x = 1.0 + g.h * static_cast<double>(i);
    if (x >= from) B = std::max(B, g.z4[i] * std::pow(x, -tau));
  }
  return B;
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  require(xs.size() >= 2 && den > 0.0, ErrorCode::IllConditioned, "slope fit needs distinct points");
  return (n * sxy - sx * sy) / den;
}

}  // namespace

MellinResult z2_eval(const MellinSpec& spec, const QuadratureOptions& q) {
  spec.validate();
  const auto grid = fourth_power_grid(spec.X_trunc, std::abs(spec.t), q);
  const auto tr = transform(grid, spec.sigma, spec.t);
  MellinResult r;
  r.value = tr.fine;
  r.modulus = std::abs(tr.fine);
  r.tail_constant = tail_constant(grid, spec.X_trunc, spec.tail_exponent);
  const double excess = spec.sigma - 1.0 - spec.tail_exponent;
  r.tail_bound = r.tail_constant * std::pow(spec.X_trunc, -excess) / excess;
  r.est_err = std::abs(tr.fine - tr.coarse) + r.tail_bound;
  r.evals = static_cast<std::int64_t>(grid.z4.size());
  return r;
}

MellinScan z2_meansq_scan(double sigma, double T_lo, double T_hi, int steps, double X_trunc,
                          double tail_exponent, const QuadratureOptions& q, double rho) {
  MellinSpec probe{sigma, T_hi, X_trunc, tail_exponent};
  probe.validate();
  require(std::isfinite(T_lo) && T_lo >= 0.0 && T_hi > T_lo, ErrorCode::InvalidArgument,
          "scan needs 0 <= T_lo < T_hi");
  require(steps >= 3, ErrorCode::InvalidArgument, "scan needs at least 3 steps");
  require(rho >= 1.0 && rho <= 1.5, ErrorCode::InvalidArgument, "rho must lie in [1, 3/2]");
  const auto grid = fourth_power_grid(X_trunc, std::max(std::abs(T_lo), std::abs(T_hi)), q);
  const auto count = static_cast<std::size_t>(steps) + 1;
  const double dt = (T_hi - T_lo) / static_cast<double>(steps);

  MellinScan scan;
  scan.sigma = sigma;
  scan.rho = rho;
  scan.theorem_exponent = (4.0 * rho + 4.0 - 8.0 * sigma) / (3.0 * rho - 1.0);
  scan.tail_exponent = tail_exponent;
  scan.points.resize(count);
  parallel_for(count, [&](std::size_t j) {
    const double t = T_lo + dt * static_cast<double>(j);
    const double m = std::abs(transform(grid, sigma, t).fine);
    scan.points[j].t = t;
    scan.points[j].abs2 = m * m;
  });
  // Trapezoid running sum: the heights are user-chosen and may not resolve
  // the peaks, and the running integral must stay nondecreasing.
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < count; ++j) {
    if (j > 0)
      scan.points[j].partial =
          scan.points[j - 1].partial + 0.5 * dt * (scan.points[j - 1].abs2 + scan.points[j].abs2);
    if (scan.points[j].t > 0.0 && scan.points[j].partial > 0.0) {
      lx.push_back(std::log(scan.points[j].t));
      ly.push_back(std::log(scan.points[j].partial));
    }
  }
  scan.fitted_slope = slope(lx, ly);
  return scan;
}

double fit_tail_exponent(double x_lo, double x_hi, const QuadratureOptions& q, int blocks) {
  require(std::isfinite(x_lo) && x_lo >= 10.0 && x_hi > 2.0 * x_lo, ErrorCode::InvalidArgument,
          "fit needs 10 <= x_lo and x_hi > 2 x_lo");
  require(blocks >= 4, ErrorCode::InvalidArgument, "fit needs at least 4 blocks");
  q.validate();
  std::vector<double> lx, ly;
  const double ratio = std::log(x_hi / x_lo) / blocks;
  for (int b = 0; b < blocks; ++b) {
    const double a = x_lo * std::exp(ratio * b);
    const double c = x_lo * std::exp(ratio * (b + 1));
    const double h = moment_spacing(c, 2.0, q);
    const auto n = static_cast<std::size_t>(std::ceil((c - a) / h)) + 1;
    const auto abs2 = sample_abs2(a, (c - a) / static_cast<double>(n - 1), n, q.eval);
    const double peak = *std::max_element(abs2.begin(), abs2.end());
    lx.push_back(std::log(std::sqrt(a * c)));
    ly.push_back(2.0 * std::log(peak));
  }
  return slope(lx, ly);
}

}  // namespace zetalab
