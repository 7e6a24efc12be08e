#include <cmath>
#include <cstdint>
#include <numeric>

#include "constants.hpp"
#include "divisor_arith.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace zetalab;

namespace {

std::int64_t divisors_by_trial(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) ++c;
  return c;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

double delta_by_enumeration(double x) {
  std::int64_t s = 0;
  for (std::int64_t n = 1; n <= static_cast<std::int64_t>(std::floor(x)); ++n)
    s += divisors_by_trial(n);
  return static_cast<double>(s) - x * (std::log(x) + 2.0 * constants::euler_gamma - 1.0);
}

}  // namespace

TEST_SUITE("divisor_arith") {
  const auto table = DivisorTable::build(200000);

  TEST_CASE("small values") {
    CHECK(table.d(1) == 1);
    CHECK(table.d(12) == 6);
    CHECK(table.d(16) * table.d(9) == table.d(144));
    for (std::int64_t n = 1; n <= 2000; ++n) CHECK(table.d(n) == divisors_by_trial(n));
  }

  TEST_CASE("primes and multiplicativity") {
    for (std::int64_t p = 2; p <= 5000; ++p)
      if (is_prime(p)) CHECK(table.d(p) == 2);
    for (std::int64_t m = 1; m <= 300; ++m)
      for (std::int64_t n = 1; n <= 300; ++n)
        if (std::gcd(m, n) == 1) CHECK(table.d(m * n) == table.d(m) * table.d(n));
  }

  TEST_CASE("Delta at small arguments") {
    CHECK(delta(1.0, table) == doctest::Approx(2.0 - 2.0 * constants::euler_gamma).epsilon(1e-14));
    CHECK(delta(1.0, table) == doctest::Approx(0.845569).epsilon(1e-6));
    CHECK(delta(10.0, table) == doctest::Approx(2.42984).epsilon(1e-5));
    for (double x : {3.5, 17.0, 99.9, 250.25})
      CHECK(delta(x, table) == doctest::Approx(delta_by_enumeration(x)).epsilon(1e-12));
  }

  TEST_CASE("Delta* at small arguments") {
    CHECK(delta_star(5.0, table) == doctest::Approx(2.18066).epsilon(1e-5));
    for (double x : {2.5, 7.0, 33.1})
      CHECK(std::abs(delta_star(x, table) - delta_star_from_delta(x, table)) <= 1e-12);
  }

  TEST_CASE("integral of Delta") {
    for (double X : {50.0, 100.0, 200.0}) {
      // Exact: Delta is a step function minus a smooth part on each [n, n+1).
      const double g = 2.0 * constants::euler_gamma - 1.0;
      auto smooth = [&](double x) { return x * x / 2.0 * std::log(x) - x * x / 4.0 + g * x * x / 2.0; };
      double steps = 0.0;
      for (std::int64_t n = 1; n < static_cast<std::int64_t>(X); ++n)
        steps += static_cast<double>(table.divisor_sum(n));
      const double integral = steps - (smooth(X) - smooth(1.0));
      CHECK(std::abs(integral) <= std::pow(X, 1.25));
    }
  }

  TEST_CASE("jumps of Delta equal d(n)") {
    for (std::int64_t n = 2; n <= 51; ++n) {
      const double x = static_cast<double>(n);
      const double eps = 1e-9;
      const double jump = delta(x, table) - delta(x - eps, table);
      CHECK(jump == doctest::Approx(table.d(n)).epsilon(1e-6));
    }
  }

  TEST_CASE("short differences of Delta*") {
    for (double x = 100.0; x <= 10000.0; x *= 1.07) {
      const double G = std::pow(x, 0.3);
      CHECK(delta_star(x + G, table) - delta_star(x - G, table) <= 64.0 * G * std::pow(x, 0.05));
    }
  }

  TEST_CASE("errors") {
    try {
      delta(1e6, table);
      FAIL("expected TableTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TableTooSmall);
    }
    try {
      DivisorTable::build(1000, 100);
      FAIL("expected CapacityExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CapacityExceeded);
    }
  }
}
