#include <cmath>
#include <cstdint>
#include <tuple>

#include "counting.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace zetalab;

namespace {

std::int64_t lemma3_brute(std::int64_t M, std::int64_t Mp, long double delta) {
  const long double tol = delta * std::sqrt(static_cast<long double>(M));
  std::int64_t c = 0;
  for (std::int64_t m = M + 1; m <= 2 * M; ++m)
    for (std::int64_t n = Mp + 1; n <= 2 * Mp; ++n) {
      const long double s = std::sqrt(static_cast<long double>(m)) + std::sqrt(static_cast<long double>(n));
      const auto top = static_cast<std::int64_t>(std::ceil((s + tol) * (s + tol))) + 1;
      for (std::int64_t k = 1; k <= top; ++k)
        if (std::fabs(s - std::sqrt(static_cast<long double>(k))) <= tol) ++c;
    }
  return c;
}

}  // namespace

TEST_SUITE("counting") {
  TEST_CASE("exact solutions at M = M' = 4") {
    const auto r = count_lemma3({4, 4, 1e-9, 1.0});
    CHECK(r.count == 4);
    CHECK(count_exact_sqrt_solutions(4, 4) == 4);
  }

  TEST_CASE("tiny delta recovers the exact solutions") {
    for (std::int64_t M : {16, 32, 64, 100})
      CHECK(count_lemma3({M, M, 1e-12, 1.0}).count == count_exact_sqrt_solutions(M, M));
    CHECK(count_lemma3({24, 9, 1e-12, 1.0}).count == count_exact_sqrt_solutions(24, 9));
  }

  TEST_CASE("brute-force triples") {
    for (auto [M, Mp, d] : {std::tuple<std::int64_t, std::int64_t, double>{16, 16, 1e-2},
                           std::tuple<std::int64_t, std::int64_t, double>{20, 7, 3e-3},
                           std::tuple<std::int64_t, std::int64_t, double>{30, 9, 5e-2}})
      CHECK(count_lemma3({M, Mp, d, 1.0}).count == lemma3_brute(M, Mp, d));
  }

  TEST_CASE("monotone in delta") {
    CHECK(count_lemma3({32, 32, 1e-3, 1.0}).count <= count_lemma3({32, 32, 1e-2, 1.0}).count);
  }

  TEST_CASE("Lemma 3 ratio") {
    CHECK(count_lemma3({64, 16, std::ldexp(1.0, -10), 1.0}).ratio <= 100.0);
  }

  TEST_CASE("Lemma 4 trivial cases") {
    for (std::int64_t N : {3, 7, 12}) {
      const auto all = count_lemma4({N, 2.0, 2, 1.0});
      CHECK(all.count == N * N * N * N);
      CHECK(count_lemma4({N, 1e-9, 2, 1.0}).count >= N * N);
    }
  }

  TEST_CASE("pair sums agree with the naive counter") {
    for (std::int64_t N = 1; N <= 24; ++N)
      for (double d : {std::ldexp(1.0, -6), std::ldexp(1.0, -10)})
        for (int k : {2, 3}) {
          CAPTURE(N);
          CHECK(count_lemma4({N, d, k, 1.0}).count == count_lemma4_naive({N, d, k, 1.0}).count);
        }
  }

  TEST_CASE("Lemma 4 ratio") {
    CHECK(count_lemma4({128, std::ldexp(1.0, -12), 2, 1.0}).ratio <= 100.0);
  }

  TEST_CASE("budgets") {
    try {
      count_lemma3({20000, 4, 1e-3, 1.0});
      FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
    try {
      count_lemma4_naive({1000, 1e-3, 2, 1.0});
      FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
  }
}
