#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zeta_eval.hpp"

namespace zetalab {

// Samples f(origin + i*step) with a fourth-order cumulative integral.
// integral(a, b) interpolates the cumulative integral with cubic Hermite
// polynomials (using f as the derivative), so arbitrary endpoints inside the
// grid keep fourth-order accuracy.
class UniformSamples {
 public:
  UniformSamples() = default;
  UniformSamples(double origin, double step, std::vector<double> values);

  double origin() const noexcept { return origin_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  double node(std::size_t i) const noexcept { return origin_ + step_ * static_cast<double>(i); }
  double back() const noexcept { return node(values_.size() - 1); }
  double value(std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double cumulative(std::size_t i) const noexcept { return cumulative_[i]; }

  double integral(double a, double b) const;
  double total() const { return cumulative_.back(); }
  // Four-point Lagrange interpolation of f.
  double interpolate(double x) const;

  // Every other sample (step doubled), starting from index 0.
  UniformSamples coarsened() const;

 private:
  double antiderivative(double x) const;

  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

// |zeta(1/2 + i t)|^2 at t = origin + i*step, i < count; negative t is
// handled through evenness of |zeta| on the critical line.
std::vector<double> sample_abs2(double origin, double step, std::size_t count,
                                const EvalPolicy& policy);

std::vector<double> powers_of(std::span<const double> abs2, double k);

}  // namespace zetalab
