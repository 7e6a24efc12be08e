#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zetalab {

// Divisor counts d(1..N) with prefix sums of d(n) and of (-1)^n d(n).
class DivisorTable {
 public:
  // Largest N accepted by build() unless a larger budget is passed.
  static constexpr std::int64_t kDefaultCapacity = 200'000'000;

  static DivisorTable build(std::int64_t limit, std::int64_t capacity = kDefaultCapacity);

  std::int64_t limit() const noexcept { return limit_; }
  std::uint32_t d(std::int64_t n) const;
  // sum_{m <= n} d(m), n in [0, limit]
  std::int64_t divisor_sum(std::int64_t n) const;
  // sum_{m <= n} (-1)^m d(m)
  std::int64_t alternating_sum(std::int64_t n) const;

 private:
  std::int64_t limit_ = 0;
  std::vector<std::uint32_t> d_;  // d_[0] unused
  std::vector<std::int64_t> sum_;
  std::vector<std::int64_t> alt_;
};

struct DivisorErrorSample {
  double x = 0.0;
  double delta = 0.0;
  double delta_star = 0.0;
};

// Delta(x) = sum_{n<=x} d(n) - x(log x + 2 gamma - 1); needs 4x <= limit.
double delta(double x, const DivisorTable& table);

// Delta*(x) = 1/2 sum_{n<=4x} (-1)^n d(n) - x(log x + 2 gamma - 1).
double delta_star(double x, const DivisorTable& table);

// The same quantity as -Delta(x) + 2 Delta(2x) - Delta(4x)/2.
double delta_star_from_delta(double x, const DivisorTable& table);

DivisorErrorSample divisor_error_sample(double x, const DivisorTable& table);

}  // namespace zetalab
