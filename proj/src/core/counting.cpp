#include "counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"

namespace zetalab {

void CountQuery3::validate() const {
  require(M >= 1 && Mp >= 1 && Mp <= M, ErrorCode::InvalidArgument, "needs 1 <= M' <= M");
  require(std::isfinite(delta) && delta > 0.0 && delta <= 1.0, ErrorCode::InvalidArgument,
          "delta must lie in (0, 1]");
  require(std::isfinite(c_bound) && c_bound > 0.0, ErrorCode::InvalidArgument,
          "c_bound must be positive");
}

void CountQuery4::validate() const {
  require(N >= 1, ErrorCode::InvalidArgument, "needs N >= 1");
  require(k_root >= 2, ErrorCode::InvalidArgument, "needs k_root >= 2");
  require(std::isfinite(delta) && delta > 0.0, ErrorCode::InvalidArgument, "delta must be positive");
  require(std::isfinite(c_bound) && c_bound > 0.0, ErrorCode::InvalidArgument,
          "c_bound must be positive");
}

namespace {

CountReport report(std::int64_t count, double bound) {
  return {count, bound, static_cast<double>(count) / bound};
}

std::int64_t ordered_total(const std::vector<std::int64_t>& parts) {
  return std::accumulate(parts.begin(), parts.end(), std::int64_t{0});
}

// |sqrt m + sqrt n - sqrt k| with the difference rewritten through
// conjugates; exact zero when 4mn = (k-m-n)^2.
double root_gap(std::int64_t m, std::int64_t n, std::int64_t k) {
  const std::int64_t a = k - m - n;
  const double rm = std::sqrt(static_cast<double>(m));
  const double rn = std::sqrt(static_cast<double>(n));
  const double rk = std::sqrt(static_cast<double>(k));
  const double root_mn = std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  double numerator = 0.0;  // 2 sqrt(mn) - a
  if (a > 0) {
    const std::int64_t disc = 4 * m * n - a * a;
    if (disc == 0) return 0.0;
    numerator = static_cast<double>(disc) / (2.0 * root_mn + static_cast<double>(a));
  } else {
    numerator = 2.0 * root_mn - static_cast<double>(a);
  }
  return std::abs(numerator / (rm + rn + rk));
}

}  // namespace

CountReport count_lemma3(const CountQuery3& q, std::int64_t max_M) {
  q.validate();
  if (q.M > max_M)
    fail(ErrorCode::BudgetExceeded,
         "M = " + std::to_string(q.M) + " exceeds the brute-force cap " + std::to_string(max_M));
  const double radius = q.delta * std::sqrt(static_cast<double>(q.M));
  const auto rows = static_cast<std::size_t>(q.M);
  std::vector<std::int64_t> per_m(rows, 0);
  parallel_for(rows, [&](std::size_t i) {
    const std::int64_t m = q.M + 1 + static_cast<std::int64_t>(i);
    std::int64_t c = 0;
    for (std::int64_t n = q.Mp + 1; n <= 2 * q.Mp; ++n) {
      const double s = std::sqrt(static_cast<double>(m)) + std::sqrt(static_cast<double>(n));
      const double lo = std::max(0.0, s - radius);
      const auto k_lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(lo * lo)) - 1);
      const auto k_hi = static_cast<std::int64_t>(std::ceil((s + radius) * (s + radius))) + 1;
      for (std::int64_t k = k_lo; k <= k_hi; ++k)
        if (root_gap(m, n, k) <= radius) ++c;
    }
    per_m[i] = c;
  });
  const double M = static_cast<double>(q.M);
  const double Mp = static_cast<double>(q.Mp);
  const double bound = q.c_bound * std::log(M + 2.0) * (M * M * Mp * q.delta + std::sqrt(M * Mp));
  return report(ordered_total(per_m), bound);
}

std::int64_t count_exact_sqrt_solutions(std::int64_t M, std::int64_t Mp) {
  require(M >= 1 && Mp >= 1, ErrorCode::InvalidArgument, "needs M, M' >= 1");
  const std::int64_t top = 2 * std::max(M, Mp);
  std::vector<bool> squarefree(static_cast<std::size_t>(top + 1), true);
  for (std::int64_t p = 2; p * p <= top; ++p)
    for (std::int64_t j = p * p; j <= top; j += p * p) squarefree[static_cast<std::size_t>(j)] = false;
  auto squares_in = [](std::int64_t d, std::int64_t lo, std::int64_t hi) {
    std::int64_t c = 0;
    for (std::int64_t a = 1; a * a * d <= hi; ++a)
      if (a * a * d > lo) ++c;
    return c;
  };
  std::int64_t total = 0;
  for (std::int64_t d = 1; d <= top; ++d)
    if (squarefree[static_cast<std::size_t>(d)])
      total += squares_in(d, M, 2 * M) * squares_in(d, Mp, 2 * Mp);
  return total;
}

namespace {

// Shared acceptance test for quadruples. The double difference of
// pair sums decides unless it lies within guard of the threshold, where the
// roots are recomputed in long double.
class QuadruplePredicate {
 public:
  QuadruplePredicate(const CountQuery4& q) : N_(q.N), k_(q.k_root) {
    const auto count = static_cast<std::size_t>(q.N);
    roots_.resize(count);
    for (std::size_t i = 0; i < count; ++i)
      roots_[i] = std::pow(static_cast<double>(q.N + 1 + static_cast<std::int64_t>(i)),
                           1.0 / k_);
    width_ = q.delta * std::pow(static_cast<double>(q.N), 1.0 / k_);
    width_ld_ = static_cast<long double>(q.delta) *
                std::pow(static_cast<long double>(q.N), 1.0L / k_);
    guard_ = 64.0 * std::numeric_limits<double>::epsilon() * 4.0 * roots_.back();
  }

  double root(std::size_t i) const { return roots_[i]; }
  double inner() const { return width_ - guard_; }
  double outer() const { return width_ + guard_; }

  // i_j are offsets in [0, N).
  bool accept(std::size_t i1, std::size_t i2, std::size_t i3, std::size_t i4) const {
    return decide((roots_[i1] + roots_[i2]) - (roots_[i3] + roots_[i4]), i1, i2, i3, i4);
  }

  bool decide(double diff, std::size_t i1, std::size_t i2, std::size_t i3, std::size_t i4) const {
    const double a = std::abs(diff);
    if (a < inner()) return true;
    if (a >= outer()) return false;
    auto r = [this](std::size_t i) {
      return std::pow(static_cast<long double>(N_ + 1 + static_cast<std::int64_t>(i)),
                      1.0L / k_);
    };
    return std::abs((r(i1) + r(i2)) - (r(i3) + r(i4))) < width_ld_;
  }

 private:
  std::int64_t N_;
  int k_;
  std::vector<double> roots_;
  double width_ = 0.0;
  long double width_ld_ = 0.0;
  double guard_ = 0.0;
};

double lemma4_bound(const CountQuery4& q) {
  const double N = static_cast<double>(q.N);
  return q.c_bound * std::log(N + 2.0) * (N * N * N * N * q.delta + N * N);
}

}  // namespace

CountReport count_lemma4_naive(const CountQuery4& q, std::int64_t max_N) {
  q.validate();
  if (q.N > max_N)
    fail(ErrorCode::BudgetExceeded,
         "N = " + std::to_string(q.N) + " exceeds the naive cap " + std::to_string(max_N));
  const QuadruplePredicate pred(q);
  const auto n = static_cast<std::size_t>(q.N);
  std::vector<std::int64_t> per_first(n, 0);
  parallel_for(n, [&](std::size_t a) {
    std::int64_t c = 0;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d3 = 0; d3 < n; ++d3)
        for (std::size_t d4 = 0; d4 < n; ++d4)
          if (pred.accept(a, b, d3, d4)) ++c;
    per_first[a] = c;
  });
  return report(ordered_total(per_first), lemma4_bound(q));
}

CountReport count_lemma4(const CountQuery4& q, std::int64_t max_N) {
  q.validate();
  if (q.N > max_N)
    fail(ErrorCode::BudgetExceeded,
         "N = " + std::to_string(q.N) + " exceeds the pair-sum cap " + std::to_string(max_N));
  const QuadruplePredicate pred(q);
  const auto n = static_cast<std::size_t>(q.N);
  struct Pair {
    double sum;
    std::uint32_t i, j;
  };
  std::vector<Pair> pairs(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pairs[i * n + j] = {pred.root(i) + pred.root(j), static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j)};
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return x.sum < y.sum || (x.sum == y.sum && (x.i < y.i || (x.i == y.i && x.j < y.j)));
  });

  std::vector<std::int64_t> per_pair(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const double s = pairs[p].sum;
    // fl(s - t) is monotone in t, so every band below is a contiguous range.
    auto first_with = [&](auto&& pred_on_diff) {
      return std::partition_point(pairs.begin(), pairs.end(),
                                  [&](const Pair& x) { return !pred_on_diff(s - x.sum); }) -
             pairs.begin();
    };
    const auto outer_lo = first_with([&](double d) { return d < pred.outer(); });
    const auto inner_lo = first_with([&](double d) { return d < pred.inner(); });
    const auto inner_hi = first_with([&](double d) { return d <= -pred.inner(); });
    const auto outer_hi = first_with([&](double d) { return d <= -pred.outer(); });
    std::int64_t c = 0;
    auto check = [&](std::ptrdiff_t from, std::ptrdiff_t to) {
      for (auto r = from; r < to; ++r) {
        const auto& x = pairs[static_cast<std::size_t>(r)];
        if (pred.decide(s - x.sum, pairs[p].i, pairs[p].j, x.i, x.j)) ++c;
      }
    };
    if (pred.inner() > 0.0) {
      c += inner_hi - inner_lo;
      check(outer_lo, inner_lo);
      check(inner_hi, outer_hi);
    } else {
      check(outer_lo, outer_hi);
    }
    per_pair[p] = c;
  });
  return report(ordered_total(per_pair), lemma4_bound(q));
}

}  // namespace zetalab
