#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "mellin.hpp"

using namespace zetalab;

TEST_SUITE("mellin") {
  const QuadratureOptions q;

  TEST_CASE("positive and decreasing in sigma") {
    const auto a = z2_eval({2.0, 0.0, 1000.0, 0.55}, q);
    const auto b = z2_eval({2.5, 0.0, 1000.0, 0.55}, q);
    CHECK(a.value.real() > 0.0);
    CHECK(a.value.imag() == 0.0);
    CHECK(b.modulus < a.modulus);
  }

  TEST_CASE("truncation difference is covered by the tail bound") {
    const auto a = z2_eval({1.5, 0.0, 1000.0, 0.2}, q);
    const auto b = z2_eval({1.5, 0.0, 4000.0, 0.2}, q);
    CHECK(std::abs(b.value - a.value) <= a.tail_bound);
  }

  TEST_CASE("tail exponent versus sigma") {
    try {
      z2_eval({1.25, 0.0, 1000.0, 0.55}, q);
      FAIL("expected TailDiverges");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TailDiverges);
    }
    const auto r = z2_eval({1.25, 0.0, 1000.0, 0.2}, q);
    CHECK(std::isfinite(r.modulus));
    CHECK(std::isfinite(r.tail_bound));
    try {
      z2_eval({1.0, 0.0, 1000.0, 0.0}, q);
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainError);
    }
  }

  TEST_CASE("conjugation symmetry") {
    for (double t : {1.0, 7.5, 20.0}) {
      const auto p = z2_eval({1.5, t, 1000.0, 0.2}, q);
      const auto m = z2_eval({1.5, -t, 1000.0, 0.2}, q);
      CHECK(p.modulus == doctest::Approx(m.modulus).epsilon(1e-14));
    }
  }

  TEST_CASE("mean-square scan") {
    const auto s = z2_meansq_scan(1.3, 1.0, 50.0, 49, 1000.0, 0.2, q);
    CHECK(std::isfinite(s.fitted_slope));
    CHECK(std::isfinite(s.theorem_exponent));
    REQUIRE(s.points.size() == 50);
    for (std::size_t i = 1; i < s.points.size(); ++i)
      CHECK(s.points[i].partial >= s.points[i - 1].partial);
    const auto direct = z2_eval({1.3, s.points[10].t, 1000.0, 0.2}, q);
    CHECK(s.points[10].abs2 == doctest::Approx(direct.modulus * direct.modulus).epsilon(1e-6));
  }

  TEST_CASE("empirical growth exponent") {
    const double tau = fit_tail_exponent(100.0, 2000.0, q);
    CHECK(std::isfinite(tau));
    CHECK(tau > 0.0);
  }
}
