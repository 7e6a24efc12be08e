#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "zetalab/zetalab.h"

TEST_SUITE("capi") {
  TEST_CASE("status names") {
    CHECK(std::string(zl_status_name(ZL_OK)) == "Ok");
    CHECK(std::string(zl_status_name(ZL_DOMAIN_ERROR)) == "DomainError");
    CHECK(std::string(zl_status_name(ZL_SCHEMA_MISMATCH)) == "SchemaMismatch");
    CHECK(std::string(zl_status_name(ZL_INTERNAL)) == "Internal");
    CHECK(std::string(zl_version()) == "0.1.0");
  }

  TEST_CASE("evaluation") {
    zl_eval_policy p;
    zl_eval_policy_default(&p);
    CHECK(p.rs_correction_order == 4);
    zl_critical_sample s;
    REQUIRE(zl_eval_zeta_half(0.0, &p, 1.0, &s) == ZL_OK);
    CHECK(s.re == doctest::Approx(-1.4603545088).epsilon(1e-10));
    CHECK(s.im == 0.0);
    REQUIRE(zl_eval_zeta_half(500.0, nullptr, 1.0, &s) == ZL_OK);
    CHECK(s.re == doctest::Approx(-0.39625650727514662).epsilon(1e-8));
  }

  TEST_CASE("two-call grid") {
    size_t n = 0;
    REQUIRE(zl_abs_power_grid(10.0, 20.0, 1.0, nullptr, 1000, 0.25, nullptr, 0, &n) == ZL_OK);
    CHECK(n >= 4);
    std::vector<zl_critical_sample> buf(n);
    CHECK(zl_abs_power_grid(10.0, 20.0, 1.0, nullptr, 1000, 0.25, buf.data(), n - 1, &n) ==
          ZL_CAPACITY_EXCEEDED);
    REQUIRE(zl_abs_power_grid(10.0, 20.0, 1.0, nullptr, 1000, 0.25, buf.data(), n, &n) == ZL_OK);
    CHECK(buf.front().t == 10.0);
    CHECK(buf.back().t == 20.0);
    CHECK(zl_abs_power_grid(10.0, 200.0, 1.0, nullptr, 3, 0.25, nullptr, 0, &n) ==
          ZL_BUDGET_EXCEEDED);
  }

  TEST_CASE("errors carry a message") {
    double v = 0.0;
    CHECK(zl_f_phase(100.0, 101, &v) == ZL_DOMAIN_ERROR);
    CHECK(std::strlen(zl_last_error()) > 0);
    CHECK(zl_f_phase(1000.0, 1, &v) == ZL_OK);
    CHECK(std::strlen(zl_last_error()) == 0);
    CHECK(v == doctest::Approx(157.78918783361318).epsilon(1e-12));
    CHECK(zl_f_phase(1000.0, 1, nullptr) == ZL_INVALID_ARGUMENT);
    zl_quad_options q;
    zl_quad_options_default(&q);
    q.policy = 7;
    zl_moment_result r;
    CHECK(zl_moment_I(1.0, 100.0, &q, &r) == ZL_INVALID_ARGUMENT);
  }

  TEST_CASE("moments") {
    zl_moment_result r;
    REQUIRE(zl_moment_I(1.0, 1000.0, nullptr, &r) == ZL_OK);
    CHECK(std::abs(r.value - 5224.3) <= 100.0);
    zl_hybrid_spec h;
    zl_hybrid_spec_default(&h);
    h.T = 1000.0;
    h.G = std::pow(1000.0, 0.4);
    zl_moment_result a, b;
    REQUIRE(zl_hybrid_moment(&h, &a) == ZL_OK);
    REQUIRE(zl_hybrid_moment_exchanged(&h, &b) == ZL_OK);
    CHECK(std::abs(a.value - b.value) <= 0.05 * a.value);
    h.ell = 3;
    CHECK(zl_hybrid_moment(&h, &a) == ZL_INVALID_ARGUMENT);
  }

  TEST_CASE("divisor handles") {
    zl_divisor_table* t = nullptr;
    REQUIRE(zl_divisor_table_create(1000, &t) == ZL_OK);
    CHECK(zl_divisor_table_limit(t) == 1000);
    uint32_t d = 0;
    REQUIRE(zl_divisor_d(t, 12, &d) == ZL_OK);
    CHECK(d == 6);
    double a = 0, b = 0;
    REQUIRE(zl_delta_star(t, 33.1, &a) == ZL_OK);
    REQUIRE(zl_delta_star_from_delta(t, 33.1, &b) == ZL_OK);
    CHECK(std::abs(a - b) <= 1e-12);
    CHECK(zl_delta(t, 1e6, &a) == ZL_TABLE_TOO_SMALL);
    CHECK(zl_divisor_d(nullptr, 1, &d) == ZL_INVALID_ARGUMENT);
    zl_divisor_table_free(t);
    zl_divisor_table* big = nullptr;
    CHECK(zl_divisor_table_create(int64_t{1} << 40, &big) == ZL_CAPACITY_EXCEEDED);
    CHECK(big == nullptr);
  }

  TEST_CASE("polynomials and series") {
    zl_polynomial* p = nullptr;
    REQUIRE(zl_polynomial_p1(&p) == ZL_OK);
    zl_polynomial_info info;
    REQUIRE(zl_polynomial_get_info(p, &info) == ZL_OK);
    CHECK(info.degree == 1);
    CHECK(info.provenance == ZL_PROVENANCE_EXACT);
    double main = 0.0;
    REQUIRE(zl_eval_main_term(p, 1000.0, &main) == ZL_OK);
    CHECK(main == doctest::Approx(5224.31).epsilon(1e-6));

    zl_divisor_table* t = nullptr;
    REQUIRE(zl_divisor_table_create(20000, &t) == ZL_OK);
    zl_series* s = nullptr;
    const double T = 5000.0, G = std::pow(T, 0.3);
    REQUIRE(zl_atkinson_series(T, G, nullptr, t, &s) == ZL_OK);
    zl_series_summary sum;
    REQUIRE(zl_series_get_summary(s, &sum) == ZL_OK);
    std::vector<double> terms(static_cast<size_t>(sum.n_max)), env(terms.size());
    REQUIRE(zl_series_get_terms(s, terms.data(), env.data(), terms.size()) == ZL_OK);
    double total = 0.0;
    for (double x : terms) total += x;
    CHECK(total == doctest::Approx(sum.oscillating_sum).epsilon(1e-12));
    zl_series_free(s);

    zl_j1_residual r;
    REQUIRE(zl_j1_residual_eval(T, G, nullptr, t, nullptr, &r) == ZL_OK);
    CHECK(std::abs(r.residual) <= 0.5 * std::log(T));
    zl_series_options o;
    zl_series_options_default(&o);
    o.n_max_override = -1;
    CHECK(zl_j1_residual_eval(T, G, nullptr, t, &o, &r) == ZL_INVALID_ARGUMENT);

    zl_moment_result e;
    CHECK(zl_j1_from_estar(3000.0, std::pow(3000.0, 0.4), t, p, nullptr, &e) == ZL_DOMAIN_ERROR);
    zl_divisor_table_free(t);
    zl_polynomial_free(p);
  }

  TEST_CASE("counting") {
    zl_count_report r;
    REQUIRE(zl_count_lemma3(4, 4, 1e-9, 1.0, &r) == ZL_OK);
    CHECK(r.count == 4);
    zl_count_report a, b;
    REQUIRE(zl_count_lemma4(20, 1.0 / 64, 2, 1.0, ZL_COUNT_PAIR_SUMS, &a) == ZL_OK);
    REQUIRE(zl_count_lemma4(20, 1.0 / 64, 2, 1.0, ZL_COUNT_NAIVE, &b) == ZL_OK);
    CHECK(a.count == b.count);
    CHECK(zl_count_lemma4(20, 1.0 / 64, 2, 1.0, 5, &b) == ZL_INVALID_ARGUMENT);
  }

  TEST_CASE("mellin handles") {
    zl_mellin_result m;
    CHECK(zl_z2_eval(1.25, 0.0, 1000.0, 0.55, nullptr, &m) == ZL_TAIL_DIVERGES);
    REQUIRE(zl_z2_eval(2.0, 0.0, 1000.0, 0.55, nullptr, &m) == ZL_OK);
    CHECK(m.modulus > 0.0);
    zl_mellin_scan* s = nullptr;
    REQUIRE(zl_z2_meansq_scan(1.3, 1.0, 20.0, 19, 500.0, 0.2, 1.5, nullptr, &s) == ZL_OK);
    zl_mellin_scan_summary sum;
    REQUIRE(zl_mellin_scan_get_summary(s, &sum) == ZL_OK);
    CHECK(sum.points == 20);
    std::vector<zl_mellin_scan_point> pts(sum.points);
    REQUIRE(zl_mellin_scan_get_points(s, pts.data(), pts.size()) == ZL_OK);
    CHECK(pts.back().t == 20.0);
    zl_mellin_scan_free(s);
  }

  TEST_CASE("threads do not change results") {
    const unsigned before = zl_get_threads();
    zl_moment_result a, b;
    zl_set_threads(1);
    REQUIRE(zl_moment_I(2.0, 3000.0, nullptr, &a) == ZL_OK);
    zl_set_threads(7);
    REQUIRE(zl_moment_I(2.0, 3000.0, nullptr, &b) == ZL_OK);
    CHECK(std::memcmp(&a.value, &b.value, sizeof(double)) == 0);
    zl_set_threads(before);
  }
}
