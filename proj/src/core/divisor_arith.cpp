#include "divisor_arith.hpp"

#include <cmath>
#include <string>

#include "constants.hpp"
#include "error.hpp"

namespace zetalab {

DivisorTable DivisorTable::build(std::int64_t limit, std::int64_t capacity) {
  require(limit >= 1, ErrorCode::InvalidArgument, "divisor table needs N >= 1");
  if (limit > capacity)
    fail(ErrorCode::CapacityExceeded,
         "divisor table of size " + std::to_string(limit) + " exceeds budget " +
             std::to_string(capacity));
  DivisorTable t;
  t.limit_ = limit;
  const auto n = static_cast<std::size_t>(limit);
  t.d_.assign(n + 1, 0);
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t m = a; m <= n; m += a) ++t.d_[m];
  t.sum_.assign(n + 1, 0);
  t.alt_.assign(n + 1, 0);
  for (std::size_t m = 1; m <= n; ++m) {
    t.sum_[m] = t.sum_[m - 1] + t.d_[m];
    t.alt_[m] = t.alt_[m - 1] + ((m % 2 == 0) ? 1 : -1) * static_cast<std::int64_t>(t.d_[m]);
  }
  return t;
}

std::uint32_t DivisorTable::d(std::int64_t n) const {
  require(n >= 1 && n <= limit_, ErrorCode::TableTooSmall, "d(n) outside the table");
  return d_[static_cast<std::size_t>(n)];
}

std::int64_t DivisorTable::divisor_sum(std::int64_t n) const {
  require(n >= 0 && n <= limit_, ErrorCode::TableTooSmall, "divisor sum outside the table");
  return sum_[static_cast<std::size_t>(n)];
}

std::int64_t DivisorTable::alternating_sum(std::int64_t n) const {
  require(n >= 0 && n <= limit_, ErrorCode::TableTooSmall,
          "alternating divisor sum outside the table");
  return alt_[static_cast<std::size_t>(n)];
}

namespace {

// Extended precision keeps the cancellation against the integer sums below
// one ulp of Delta for x up to 1e6.
long double main_term(double x) {
  const long double lx = x;
  return lx * (std::log(lx) + constants::two_gamma_minus_one_l);
}

void check_argument(double x, const DivisorTable& table) {
  require(std::isfinite(x) && x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
  if (4.0 * x > static_cast<double>(table.limit()))
    fail(ErrorCode::TableTooSmall, "table limit " + std::to_string(table.limit()) +
                                       " does not cover 4x = " + std::to_string(4.0 * x));
}

std::int64_t floor_index(double x) { return static_cast<std::int64_t>(std::floor(x)); }

}  // namespace

double delta(double x, const DivisorTable& table) {
  check_argument(x, table);
  return static_cast<double>(static_cast<long double>(table.divisor_sum(floor_index(x))) -
                             main_term(x));
}

double delta_star(double x, const DivisorTable& table) {
  check_argument(x, table);
  return static_cast<double>(
      0.5L * static_cast<long double>(table.alternating_sum(floor_index(4.0 * x))) - main_term(x));
}

double delta_star_from_delta(double x, const DivisorTable& table) {
  check_argument(x, table);
  auto partial = [&](double y) {
    return static_cast<long double>(table.divisor_sum(floor_index(y))) - main_term(y);
  };
  return static_cast<double>(-partial(x) + 2.0L * partial(2.0 * x) - 0.5L * partial(4.0 * x));
}

DivisorErrorSample divisor_error_sample(double x, const DivisorTable& table) {
  return {x, delta(x, table), delta_star(x, table)};
}

}  // namespace zetalab
