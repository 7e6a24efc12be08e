#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"
#include "error.hpp"
#include "zeta_eval.hpp"

using namespace zetalab;

namespace {

struct Reference {
  double t, re, im;
};

// mpmath zeta at 30 digits.
const Reference kReference[] = {
    {5.0, 0.70181237116568663, 0.23103800839141993},
    {50.0, -0.081712108320979975, 0.33079219403866130},
    {500.0, -0.39625650727514662, -1.4181267413453708},
    {1000.5, 2.5443755672349228, -0.15775078482202696},
    {10000.25, 0.35115330966427265, -0.37086901302387485},
    {100000.75, 0.059813730212740419, 0.075485507148240497},
};

double trapezoid(const std::vector<CriticalSample>& g) {
  double s = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i)
    s += 0.5 * (g[i].t - g[i - 1].t) * (g[i].abs2k + g[i - 1].abs2k);
  return s;
}

}  // namespace

TEST_SUITE("zeta_eval") {
  TEST_CASE("zeta(1/2) against the real zeta function") {
    const double oracle = boost::math::zeta(0.5);
    const auto s = eval_zeta_half(0.0, EvalPolicy{});
    CHECK(s.value.imag() == 0.0);
    CHECK(std::abs(s.value.real() - oracle) <= std::max(s.err_bound, 1e-10));
    CHECK(s.value.real() == doctest::Approx(-1.4603545088).epsilon(1e-10));
  }

  TEST_CASE("first zero") {
    EvalPolicy p;
    const auto lo = detail::riemann_siegel_z(14.13, 4, Accumulation::F64);
    const auto hi = detail::riemann_siegel_z(14.14, 4, Accumulation::F64);
    CHECK(lo.z * hi.z < 0.0);
    CHECK(std::abs(eval_zeta_half(14.134725, p).value) <= 1e-3);
  }

  TEST_CASE("reference values") {
    for (const auto& r : kReference) {
      const auto s = eval_zeta_half(r.t, EvalPolicy{});
      CAPTURE(r.t);
      CHECK(std::abs(s.value - std::complex<double>(r.re, r.im)) <= s.err_bound + 1e-14);
      CHECK(s.err_bound <= 1e-6);
    }
  }

  TEST_CASE("both methods agree at moderate height") {
    EvalPolicy em, rs;
    em.method = EvalMethod::EulerMaclaurin;
    rs.method = EvalMethod::RiemannSiegel;
    for (double t : {1234.5, 5000.0, 20000.0}) {
      const auto a = eval_zeta_half(t, em);
      const auto b = eval_zeta_half(t, rs);
      CHECK(std::abs(a.value - b.value) <= a.err_bound + b.err_bound);
    }
  }

  TEST_CASE("conjugate symmetry") {
    for (double t : {5.0, 50.0, 500.0}) {
      const auto s = eval_zeta_half(t, EvalPolicy{});
      const auto c = detail::zeta_euler_maclaurin({0.5, -t}, 1e-10);
      CHECK(std::abs(std::abs(s.value) - std::abs(c.value)) <= s.err_bound + c.err_bound);
    }
  }

  TEST_CASE("abs2k matches the propagated value") {
    for (double k : {0.5, 1.0, 2.0, 3.0}) {
      const auto s = eval_zeta_half(777.0, EvalPolicy{}, k);
      const double m = std::abs(s.value);
      CHECK(s.abs2k >= 0.0);
      CHECK(std::abs(s.abs2k - std::pow(m, 2 * k)) <=
            2.0 * s.err_bound * k * std::pow(m, 2 * k - 1) + 1e-12 * s.abs2k);
    }
  }

  TEST_CASE("double-double accumulation") {
    EvalPolicy dd;
    dd.accumulation = Accumulation::DoubleDouble;
    const auto a = eval_zeta_half(10000.25, dd);
    CHECK(std::abs(a.value - std::complex<double>(kReference[4].re, kReference[4].im)) <= a.err_bound);
  }

  TEST_CASE("grid on [10, 11]") {
    const auto g = abs_power_grid(10.0, 11.0, 1.0, EvalPolicy{}, 1000);
    CHECK(g.size() >= 4);
    for (const auto& s : g) CHECK(s.abs2k >= 0.0);
  }

  TEST_CASE("grid refinement on [100, 110]") {
    const auto coarse = abs_power_grid(100.0, 110.0, 1.0, EvalPolicy{}, 100000, 0.25);
    const auto fine = abs_power_grid(100.0, 110.0, 1.0, EvalPolicy{}, 100000, 0.125);
    const double ratio = trapezoid(coarse) / trapezoid(fine);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }

  TEST_CASE("k = 2 grid is the square of the k = 1 grid") {
    const auto g1 = abs_power_grid(300.0, 310.0, 1.0, EvalPolicy{}, 100000);
    const auto g2 = abs_power_grid(300.0, 310.0, 2.0, EvalPolicy{}, 100000);
    REQUIRE(g1.size() == g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g2[i].abs2k == g1[i].abs2k * g1[i].abs2k);
  }

  TEST_CASE("errors") {
    EvalPolicy strict;
    strict.method = EvalMethod::RiemannSiegel;
    strict.rs_correction_order = 0;
    strict.target_abs_err = 1e-12;
    try {
      eval_zeta_half(100.0, strict);
      FAIL("expected UnsupportedHeight");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedHeight);
    }
    try {
      abs_power_grid(10.0, 100.0, 1.0, EvalPolicy{}, 3);
      FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
  }
}
