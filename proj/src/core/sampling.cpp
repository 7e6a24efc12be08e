#include "sampling.hpp"

#include <algorithm>
#include <cmath>

#include "double_double.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

UniformSamples::UniformSamples(double origin, double step, std::vector<double> values)
    : origin_(origin), step_(step), values_(std::move(values)) {
  require(step_ > 0.0 && std::isfinite(step_), ErrorCode::InvalidArgument,
          "sample step must be positive");
  require(values_.size() >= 4, ErrorCode::InvalidArgument, "need at least four samples");
  const std::size_t n = values_.size();
  const double w = step_ / 24.0;
  const auto& f = values_;
  cumulative_.assign(n, 0.0);
  DoubleDouble running;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double cell;
    if (i == 0) {
      cell = w * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (i + 2 == n) {
      cell = w * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    } else {
      cell = w * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    }
    running += cell;
    cumulative_[i + 1] = running.value();
  }
}

double UniformSamples::antiderivative(double x) const {
  const double pos = (x - origin_) / step_;
  const double last = static_cast<double>(values_.size() - 1);
  require(pos >= -1e-9 && pos <= last + 1e-9, ErrorCode::InvalidArgument,
          "integration bound outside the sampled range");
  std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, last - 1.0));
  const double u = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  if (u == 0.0) return cumulative_[i];
  if (u == 1.0) return cumulative_[i + 1];
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  return h00 * cumulative_[i] + h10 * step_ * values_[i] + h01 * cumulative_[i + 1] +
         h11 * step_ * values_[i + 1];
}

double UniformSamples::integral(double a, double b) const {
  return antiderivative(b) - antiderivative(a);
}

double UniformSamples::interpolate(double x) const {
  const double pos = (x - origin_) / step_;
  const double last = static_cast<double>(values_.size() - 1);
  require(pos >= -1e-9 && pos <= last + 1e-9, ErrorCode::InvalidArgument,
          "interpolation point outside the sampled range");
  const std::size_t base = static_cast<std::size_t>(
      std::clamp(std::floor(pos) - 1.0, 0.0, last - 3.0));
  const double u = pos - static_cast<double>(base);
  double out = 0.0;
  for (int j = 0; j < 4; ++j) {
    double l = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != j) l *= (u - m) / static_cast<double>(j - m);
    out += l * values_[base + j];
  }
  return out;
}

UniformSamples UniformSamples::coarsened() const {
  std::vector<double> half;
  half.reserve(values_.size() / 2 + 1);
  for (std::size_t i = 0; i < values_.size(); i += 2) half.push_back(values_[i]);
  return UniformSamples(origin_, 2.0 * step_, std::move(half));
}

std::vector<double> sample_abs2(double origin, double step, std::size_t count,
                                const EvalPolicy& policy) {
  std::vector<double> out(count);
  parallel_for(count, [&](std::size_t i) {
    const double t = origin + step * static_cast<double>(i);
    out[i] = std::norm(eval_zeta_half(std::abs(t), policy).value);
  });
  return out;
}

std::vector<double> powers_of(std::span<const double> abs2, double k) {
  std::vector<double> out(abs2.size());
  for (std::size_t i = 0; i < abs2.size(); ++i) out[i] = nonneg_power(abs2[i], k);
  return out;
}

}  // namespace zetalab
