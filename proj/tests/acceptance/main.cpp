#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "counting.hpp"
#include "divisor_arith.hpp"
#include "error.hpp"
#include "explicit_formulas.hpp"
#include "jutila_meansq.hpp"
#include "moments.hpp"

using namespace zetalab;
namespace fs = std::filesystem;

namespace {

// Criteria that fail at the tested heights; they still print FAIL.
const std::set<int> kKnownFailures = {3, 5};

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Outcome second_moment() {
  Outcome o;
  const auto p1 = MainTermPolynomial::p1();
  for (double T : {500.0, 1000.0, 5000.0, 10000.0}) {
    const double e = moment_I(1.0, T, {}).value - eval_main_term(p1, T);
    const double bound = 10.0 * std::cbrt(T);
    o.check(std::abs(e) <= bound, fmt("T=%g |E|=%.3g", T, std::abs(e)) + fmt(" <= %.3g", bound));
  }
  return o;
}

Outcome sign_changes() {
  Outcome o;
  std::vector<double> heights;
  for (double T = 10.0; T <= 2000.0; T += 0.5) heights.push_back(T);
  const auto s = error_term_scan(ErrorTermKind::E, heights, MainTermPolynomial::p1(), {}, nullptr);
  int changes = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i - 1].value < 0.0) != (s[i].value < 0.0)) ++changes;
  o.check(changes >= 10, fmt("%g sign changes on [10, 2000]", changes));
  return o;
}

Outcome lemma1_identity() {
  Outcome o;
  for (auto [T, e] : {std::pair{2000.0, 0.35}, std::pair{5000.0, 0.3}}) {
    const double G = std::pow(T, e);
    const auto n_max = default_series_cutoff(T, G);
    const auto table = DivisorTable::build(2 * n_max + 2);
    const auto base = j1_residual(T, G, {}, table);
    QuadratureOptions fine;
    fine.spacing_factor /= 2.0;
    const auto refined = j1_residual(T, G, fine, table);
    ExplicitSeriesOptions doubled;
    doubled.n_max_override = 2 * n_max;
    const auto wider = j1_residual(T, G, {}, table, doubled);
    const double bound = 0.5 * std::log(T);
    const double d_quad = std::abs(refined.residual - base.residual);
    const double d_cut = std::abs(wider.residual - base.residual) / std::abs(base.direct);
    o.check(std::abs(base.residual) <= bound,
            fmt("T=%g |residual|=%.3g", T, std::abs(base.residual)) + fmt(" <= %.3g", bound));
    o.check(d_quad <= 1e-3, fmt("T=%g quadrature change %.3g <= 1e-3", T, d_quad));
    o.check(d_cut <= 1e-6, fmt("T=%g cutoff change %.3g <= 1e-6 rel", T, d_cut));
  }
  return o;
}

Outcome estar_identity() {
  Outcome o;
  const double t = 3000.0;
  const double G = std::pow(t, 0.3);
  const auto table =
      DivisorTable::build(static_cast<std::int64_t>(std::ceil(4.0 * (t + G * std::log(t)) / (2.0 * M_PI))) + 2);
  const double direct = smoothed_J(1.0, t, G, {}).value;
  const double via = j1_from_estar(t, G, table, MainTermPolynomial::p1(), {}).value;
  const double bound = 3.0 * std::pow(std::log(t), 2);
  o.check(std::abs(direct - via) <= bound, fmt("|difference|=%.3g <= %.3g", std::abs(direct - via), bound));
  return o;
}

Outcome jutila() {
  Outcome o;
  const DiffMeanSquareSpec spec{3000.0, 3000.0, 25.0};
  const auto table = DivisorTable::build(static_cast<std::int64_t>(spec.T / (2.0 * spec.U)) + 2);
  const double direct = diff_meansq(spec, DiffMethod::Direct, {}, nullptr).value;
  const double series = diff_meansq(spec, DiffMethod::Series, {}, &table).value;
  const double r = direct / series;
  o.check(r >= 0.5 && r <= 2.0, fmt("direct/series=%.3g in [0.5, 2]", r));
  const double T = 4000.0;
  for (double e : {0.2, 0.3, 0.45}) {
    const double a = asymp_ratio(T, std::pow(T, e), {});
    o.check(a >= 0.01 && a <= 100.0, fmt("U=T^%g ratio=%.3g in [0.01, 100]", e, a));
  }
  return o;
}

Outcome counting() {
  Outcome o;
  const auto c = count_lemma3({4, 4, 1e-9, 1.0});
  o.check(c.count == 4, fmt("lemma3(4,4,1e-9)=%g", static_cast<double>(c.count)));
  int mismatches = 0;
  for (std::int64_t N = 1; N <= 40; ++N)
    for (double d : {std::ldexp(1.0, -6), std::ldexp(1.0, -10)}) {
      const CountQuery4 q{N, d, 2, 1.0};
      if (count_lemma4(q).count != count_lemma4_naive(q).count) ++mismatches;
    }
  o.check(mismatches == 0, fmt("pair-sum vs naive mismatches=%g for N<=40", mismatches));
  double worst = 0.0;
  for (std::int64_t M = 1; M <= 128; M *= 2)
    for (std::int64_t Mp = 1; Mp <= M; Mp *= 2)
      for (double d : {std::ldexp(1.0, -6), std::ldexp(1.0, -10)})
        worst = std::max(worst, count_lemma3({M, Mp, d, 1.0}).ratio);
  for (std::int64_t N = 1; N <= 128; N *= 2)
    for (double d : {std::ldexp(1.0, -6), std::ldexp(1.0, -10)})
      for (int k : {2, 3}) worst = std::max(worst, count_lemma4({N, d, k, 1.0}).ratio);
  o.check(worst <= 100.0, fmt("max bound ratio=%.3g <= 100", worst));
  return o;
}

Outcome hybrid() {
  Outcome o;
  for (double T : {500.0, 1000.0})
    for (double e : {0.2, 0.4}) {
      HybridMomentSpec s;
      s.k = 2;
      s.ell = 2;
      s.m = 1;
      s.T = T;
      s.G = std::pow(T, e);
      const double v = hybrid_moment(s).value;
      const double r = v / (T * s.G * std::pow(std::log(T), 2));
      const double x = hybrid_moment_exchanged(s).value;
      const double rel = std::abs(v - x) / v;
      o.check(r >= 0.01 && r <= 50.0, fmt("T=%g G=T^%g", T, e) + fmt(" ratio=%.3g", r));
      o.check(rel <= 0.05, fmt("T=%g exchange rel diff=%.2g", T, rel));
    }
  return o;
}

Outcome fourth_moment() {
  Outcome o;
  const auto p4 = fit_p4(1000.0, 10000.0, 40, {});
  std::vector<double> heights;
  for (const auto& c : p4.calibration) heights.push_back(c.first);
  const auto s = error_term_scan(ErrorTermKind::E2, heights, p4, {}, nullptr);
  double worst_e = 0.0, lo = INFINITY, hi = 0.0;
  for (const auto& x : s) {
    const double L = std::log(x.T);
    worst_e = std::max(worst_e, std::abs(x.value) / (5.0 * std::pow(x.T, 2.0 / 3.0) * std::pow(L, 8)));
    const double r = x.moment * 2.0 * M_PI * M_PI / (x.T * std::pow(L, 4));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  o.check(worst_e <= 1.0, fmt("max |E2|/(5 T^(2/3) log^8 T)=%.3g", worst_e));
  o.check(lo > 0.3 && hi < 3.0, fmt("I2 ratio in [%.3g, %.3g]", lo, hi));
  return o;
}

Outcome divisor() {
  Outcome o;
  const auto table = DivisorTable::build(50'000);
  double worst = 0.0;
  for (int j = 0; j < 100; ++j) {
    const double x = 1.5 + 97.31 * j;
    worst = std::max(worst, std::abs(delta_star(x, table) - delta_star_from_delta(x, table)));
  }
  o.check(worst <= 1e-12, fmt("max Delta* form gap=%.3g", worst));
  int bad = 0;
  for (std::int64_t n = 2; n <= 51; ++n) {
    const double x = static_cast<double>(n);
    const double jump = delta(x, table) - delta(x - 1e-9, table);
    if (std::abs(jump - table.d(n)) > 1e-6 * table.d(n)) ++bad;
  }
  o.check(bad == 0, fmt("jump mismatches=%g at 50 integers", bad));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::string> runs = {
      "zeta-eval --t0 1000 --t1 1010 --max-points 400",
      "moment --k 1 --T 500,1000",
      "smoothed --k 1 --t 1000,2000",
      "hybrid --T 500",
      "error-term --kind E --T-lo 10 --T-hi 2000 --steps 400",
      "error-term --kind E2 --T-lo 1000 --T-hi 3000 --steps 20 --fit-hi 3000 --fit-count 20",
      "atkinson --T 2000",
      "estar-j1 --t 3000",
      "count3 --M 64 --Mp 32 --delta 0.001",
      "count4 --N 40 --delta 0.01",
      "jutila --T 3000 --H 1000 --U 25",
      "mellin --mode eval --sigma 1.5 --t 1,5 --tau 0.2 --X 300",
      "mellin --mode scan --sigma 1.5 --T-lo 0 --T-hi 20 --steps 8 --tau 0.2 --X 300",
      "divisor --x-lo 10 --x-hi 1000 --steps 50",
  };
  const fs::path dir = fs::temp_directory_path() / ("zetalab-accept-" + std::to_string(getpid()));
  fs::create_directories(dir);
  int differing = 0, failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (const char* format : {"csv", "json"}) {
      std::vector<std::string> outputs;
      for (const char* threads : {"1", "4", "4"}) {
        const fs::path out = dir / (std::to_string(i) + "-" + format + "-" + std::to_string(outputs.size()));
        const std::string cmd = std::string(ZETALAB_CLI) + " --threads " + threads + " --format " +
                                format + " -o " + out.string() + " " + runs[i] + " 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) {
          ++failed;
          std::fprintf(stderr, "run failed: %s\n", cmd.c_str());
        }
        outputs.push_back(slurp(out));
      }
      if (outputs[0] != outputs[1] || outputs[1] != outputs[2] || outputs[0].empty()) {
        ++differing;
        std::fprintf(stderr, "outputs differ: %s (%s)\n", runs[i].c_str(), format);
      }
    }
  fs::remove_all(dir);
  o.check(failed == 0, fmt("%g failed runs", failed));
  o.check(differing == 0, fmt("%g of %g configs not bitwise identical", differing, 2.0 * runs.size()));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"second moment main term", second_moment},
      {"sign changes of E", sign_changes},
      {"smoothed second moment explicit series", lemma1_identity},
      {"smoothed moment via E*", estar_identity},
      {"mean square of E differences", jutila},
      {"counting oracles", counting},
      {"hybrid moment", hybrid},
      {"fourth moment error term", fourth_moment},
      {"divisor identities", divisor},
      {"determinism", determinism},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o.check(false, std::string(error_name(e.code())) + ": " + e.what());
    } catch (const std::exception& e) {
      o.check(false, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = kKnownFailures.count(id) > 0;
    std::printf("criterion %2d %s: %s (%.1f s) %s%s\n", id, o.pass ? "PASS" : "FAIL",
                criteria[i].first, secs, o.detail.c_str(),
                !o.pass && known ? " [known failure]" : "");
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
    if (o.pass && known) std::printf("criterion %2d now passes; drop it from the known failures\n", id);
  }
  return unexpected == 0 ? 0 : 1;
}
