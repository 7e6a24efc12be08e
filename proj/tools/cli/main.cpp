#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "zetalab/zetalab.h"

extern char** environ;

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kEnvPrefix = "ZETALAB_";
constexpr double kPi = 3.14159265358979323846;

struct CliError {
  zl_status status;
  std::string message;
};

[[noreturn]] void raise(zl_status status, const std::string& message) {
  throw CliError{status, message};
}

void check(zl_status s, const std::string& what) {
  if (s == ZL_OK) return;
  std::string message = zl_last_error();
  const std::string prefix = std::string(zl_status_name(s)) + ": ";
  if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
  raise(s, what + ": " + message);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- typed parameters ------------------------------------------------------

using ParamRef = std::variant<double*, std::int64_t*, int*, std::string*, std::vector<double>*>;

struct Param {
  std::string name;
  ParamRef ref;
};

std::string render(const ParamRef& ref) {
  struct {
    std::string operator()(double* v) const { return fmt(*v); }
    std::string operator()(std::int64_t* v) const { return std::to_string(*v); }
    std::string operator()(int* v) const { return std::to_string(*v); }
    std::string operator()(std::string* v) const { return *v; }
    std::string operator()(std::vector<double>* v) const {
      std::string s;
      for (std::size_t i = 0; i < v->size(); ++i) s += (i ? ";" : "") + fmt((*v)[i]);
      return s;
    }
  } visitor;
  return std::visit(visitor, ref);
}

json to_json(const ParamRef& ref) {
  struct {
    json operator()(double* v) const { return *v; }
    json operator()(std::int64_t* v) const { return *v; }
    json operator()(int* v) const { return *v; }
    json operator()(std::string* v) const { return *v; }
    json operator()(std::vector<double>* v) const { return *v; }
  } visitor;
  return std::visit(visitor, ref);
}

std::string env_name(const std::string& flag) {
  std::string out = kEnvPrefix;
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Experiment {
 public:
  Experiment(CLI::App& parent, std::string name, std::string help)
      : name_(std::move(name)), app_(parent.add_subcommand(name_, std::move(help))) {}

  template <class T>
  CLI::Option* add(const std::string& flag, T& value, const std::string& help) {
    auto* opt = app_->add_option("--" + flag, value, help)->envname(env_name(flag));
    if constexpr (std::is_same_v<T, std::vector<double>>) opt->delimiter(',');
    opt->capture_default_str();
    params_.push_back({flag, &value});
    env_.insert(env_name(flag));
    return opt;
  }

  CLI::Option* choice(const std::string& flag, std::string& value, std::vector<std::string> allowed,
                      const std::string& help) {
    return add(flag, value, help)->check(CLI::IsMember(std::move(allowed)));
  }

  const std::string& name() const { return name_; }
  CLI::App* app() const { return app_; }
  const std::vector<Param>& params() const { return params_; }
  bool knows_env(const std::string& key) const { return env_.count(key) > 0; }

  std::function<void()> run;

 private:
  std::string name_;
  CLI::App* app_;
  std::vector<Param> params_;
  std::set<std::string> env_;
};

// ---- result tables ---------------------------------------------------------

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> diagnostics;

  void row(std::vector<Cell> r) {
    if (r.size() != columns.size()) raise(ZL_INTERNAL, "row width does not match the schema");
    rows.push_back(std::move(r));
  }
};

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return fmt(*d);
  if (auto i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return fmt(*d);
    return *d;
  }
  if (auto i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

struct Settings {
  unsigned threads = 0;
  std::string precision = "f64";
  std::string format = "csv";
  std::string output;
};

std::string to_csv(const Experiment& ex, const Settings& s, const Table& t) {
  std::ostringstream out;
  out << "# zetalab " << zl_version() << "\n";
  out << "# experiment=" << ex.name() << "\n";
  out << "# precision=" << s.precision << "\n";
  for (const auto& p : ex.params()) out << "# " << p.name << "=" << render(p.ref) << "\n";
  for (const auto& [k, v] : t.diagnostics) out << "# diagnostic " << k << "=" << cell_text(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i]);
    out << "\n";
  }
  return out.str();
}

std::string to_json_doc(const Experiment& ex, const Settings& s, const Table& t) {
  json config;
  config["version"] = zl_version();
  config["experiment"] = ex.name();
  config["precision"] = s.precision;
  json params = json::object();
  for (const auto& p : ex.params()) params[p.name] = to_json(p.ref);
  config["parameters"] = params;
  json results = json::array();
  for (const auto& r : t.rows) {
    json obj;
    for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = cell_json(r[i]);
    results.push_back(obj);
  }
  json diag = json::object();
  for (const auto& [k, v] : t.diagnostics) diag[k] = cell_json(v);
  json doc;
  doc["config"] = config;
  doc["results"] = results;
  doc["diagnostics"] = diag;
  return doc.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) raise(ZL_IO_ERROR, "cannot open " + tmp);
    f << content;
    f.flush();
    if (!f) raise(ZL_IO_ERROR, "write failed on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    raise(ZL_IO_ERROR, "cannot rename onto " + path);
  }
}

// ---- shared option groups -------------------------------------------------

struct QuadFlags {
  std::string policy = "uniform";
  double rel_err = 1e-6;
  std::int64_t max_evals = 20'000'000;
  double spacing = 0.25;
  std::string method = "auto";
  double target_err = 1e-6;
  int rs_order = 4;

  void attach(Experiment& ex) {
    ex.choice("quad", policy, {"uniform", "adaptive"}, "quadrature policy");
    ex.add("rel-err", rel_err, "target relative error");
    ex.add("max-evals", max_evals, "evaluation budget");
    ex.add("spacing", spacing, "grid spacing factor in (0, 0.25]");
    attach_eval(ex);
  }

  void attach_eval(Experiment& ex) {
    ex.choice("method", method, {"auto", "em", "rs"}, "zeta evaluation method");
    ex.add("target-err", target_err, "absolute error target per evaluation");
    ex.add("rs-order", rs_order, "Riemann-Siegel correction order 0..4");
  }

  zl_eval_policy eval(const Settings& s) const {
    zl_eval_policy p;
    zl_eval_policy_default(&p);
    p.method = method == "em" ? ZL_METHOD_EULER_MACLAURIN
               : method == "rs" ? ZL_METHOD_RIEMANN_SIEGEL
                                : ZL_METHOD_AUTO;
    p.target_abs_err = target_err;
    p.rs_correction_order = rs_order;
    p.accumulation = s.precision == "dd" ? ZL_ACC_DOUBLE_DOUBLE : ZL_ACC_F64;
    return p;
  }

  zl_quad_options quad(const Settings& s) const {
    zl_quad_options q;
    zl_quad_options_default(&q);
    q.policy = policy == "adaptive" ? ZL_QUAD_ADAPTIVE : ZL_QUAD_UNIFORM;
    q.target_rel_err = rel_err;
    q.max_evals = max_evals;
    q.spacing_factor = spacing;
    q.eval = eval(s);
    return q;
  }
};

// Width G: either --G or T^{G-exp}; G takes precedence when positive.
struct WidthFlags {
  double G = 0.0;
  double G_exp = 0.3;

  void attach(Experiment& ex, double default_exp) {
    G_exp = default_exp;
    ex.add("G", G, "width (0 selects T^G-exp)");
    ex.add("G-exp", G_exp, "width exponent");
  }

  double at(double T) const { return G > 0.0 ? G : std::pow(T, G_exp); }
};

class Table_ptr {
 public:
  explicit Table_ptr(std::int64_t limit) {
    check(zl_divisor_table_create(std::max<std::int64_t>(limit, 16), &t_), "divisor table");
  }
  ~Table_ptr() { zl_divisor_table_free(t_); }
  Table_ptr(const Table_ptr&) = delete;
  Table_ptr& operator=(const Table_ptr&) = delete;
  const zl_divisor_table* get() const { return t_; }

 private:
  zl_divisor_table* t_ = nullptr;
};

class Poly_ptr {
 public:
  Poly_ptr() = default;
  ~Poly_ptr() { zl_polynomial_free(p_); }
  Poly_ptr(const Poly_ptr&) = delete;
  Poly_ptr& operator=(const Poly_ptr&) = delete;
  zl_polynomial** out() { return &p_; }
  const zl_polynomial* get() const { return p_; }

 private:
  zl_polynomial* p_ = nullptr;
};

void need_nonempty(const std::vector<double>& v, const char* flag) {
  if (v.empty()) raise(ZL_CONFIG_INVALID, std::string("--") + flag + " needs at least one value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zetalab experiment driver"};
  app.require_subcommand(1);
  app.allow_extras(false);
  app.fallthrough();
  Settings settings;
  app.add_option("--threads", settings.threads, "worker cap (0 = hardware concurrency)")
      ->envname("ZETALAB_THREADS")
      ->capture_default_str();
  app.add_option("--precision", settings.precision, "accumulation mode")
      ->envname("ZETALAB_PRECISION")
      ->check(CLI::IsMember({"f64", "dd"}))
      ->capture_default_str();
  app.add_option("--format", settings.format, "output format")
      ->envname("ZETALAB_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output,-o", settings.output, "output file (stdout when empty)")
      ->envname("ZETALAB_OUTPUT");
  const std::set<std::string> global_env = {"ZETALAB_THREADS", "ZETALAB_PRECISION",
                                            "ZETALAB_FORMAT", "ZETALAB_OUTPUT"};

  std::vector<std::unique_ptr<Experiment>> experiments;
  Table table;
  auto make = [&](const std::string& name, const std::string& help) -> Experiment& {
    experiments.push_back(std::make_unique<Experiment>(app, name, help));
    return *experiments.back();
  };

  // zeta-eval
  auto& zeval = make("zeta-eval", "zeta(1/2+it) on a uniform grid");
  double ze_t0 = 14.134725, ze_t1 = 14.134725, ze_k = 1.0;
  std::int64_t ze_points = 100000;
  QuadFlags ze_q;
  zeval.add("t0", ze_t0, "grid start");
  zeval.add("t1", ze_t1, "grid end");
  zeval.add("k", ze_k, "power: abs2k column holds |zeta|^(2k)");
  zeval.add("max-points", ze_points, "grid size cap");
  zeval.add("spacing", ze_q.spacing, "grid spacing factor in (0, 0.25]");
  ze_q.attach_eval(zeval);
  zeval.run = [&] {
    const auto pol = ze_q.eval(settings);
    table.columns = {"t", "re", "im", "abs2k", "err_bound", "method"};
    std::vector<zl_critical_sample> samples;
    if (ze_t1 == ze_t0) {
      samples.resize(1);
      check(zl_eval_zeta_half(ze_t0, &pol, ze_k, samples.data()), "zeta-eval");
    } else {
      std::size_t n = 0;
      const auto cap = static_cast<std::size_t>(std::max<std::int64_t>(ze_points, 0));
      check(zl_abs_power_grid(ze_t0, ze_t1, ze_k, &pol, cap, ze_q.spacing, nullptr, 0, &n),
            "zeta-eval grid");
      samples.resize(n);
      check(zl_abs_power_grid(ze_t0, ze_t1, ze_k, &pol, cap, ze_q.spacing, samples.data(), n, &n),
            "zeta-eval grid");
    }
    static const char* names[] = {"em", "rs", "auto"};
    for (const auto& s : samples)
      table.row({s.t, s.re, s.im, s.abs2k, s.err_bound, std::string(names[s.method])});
  };

  // moment
  auto& mom = make("moment", "I_k(T) = int_0^T |zeta(1/2+it)|^(2k) dt");
  double mo_k = 1.0;
  std::vector<double> mo_T = {1000.0};
  QuadFlags mo_q;
  mom.add("k", mo_k, "moment index");
  mom.add("T", mo_T, "heights");
  mo_q.attach(mom);
  mom.run = [&] {
    need_nonempty(mo_T, "T");
    const auto q = mo_q.quad(settings);
    table.columns = {"k", "T", "value", "est_err", "evals", "ratio"};
    Poly_ptr p1;
    check(zl_polynomial_p1(p1.out()), "P1");
    for (double T : mo_T) {
      zl_moment_result r;
      check(zl_moment_I(mo_k, T, &q, &r), "moment at T=" + fmt(T));
      double ratio = std::nan("");
      if (mo_k == 1.0 && T >= 2.0) {
        double main = 0.0;
        check(zl_eval_main_term(p1.get(), T, &main), "main term");
        ratio = r.value / main;
      } else if (mo_k == 2.0 && T > 1.0) {
        const double L = std::log(T);
        ratio = r.value * 2.0 * kPi * kPi / (T * L * L * L * L);
      }
      table.row({mo_k, T, r.value, r.est_err, r.evals, ratio});
    }
  };

  // smoothed
  auto& smo = make("smoothed", "Gaussian-smoothed moment J_k(t, G)");
  double sm_k = 1.0;
  std::vector<double> sm_t = {1000.0};
  WidthFlags sm_w;
  QuadFlags sm_q;
  smo.add("k", sm_k, "moment index");
  smo.add("t", sm_t, "centres");
  sm_w.attach(smo, 0.3);
  sm_q.attach(smo);
  smo.run = [&] {
    need_nonempty(sm_t, "t");
    const auto q = sm_q.quad(settings);
    table.columns = {"t", "G", "value", "est_err", "evals"};
    for (double t : sm_t) {
      zl_moment_result r;
      const double G = sm_w.at(t);
      check(zl_smoothed_J(sm_k, t, G, &q, &r), "smoothed at t=" + fmt(t));
      table.row({t, G, r.value, r.est_err, r.evals});
    }
  };

  // hybrid
  auto& hyb = make("hybrid", "hybrid moment int_T^2T |zeta|^k (int_{t-G}^{t+G} |zeta|^l)^m dt");
  int hy_k = 2, hy_l = 2, hy_m = 1;
  std::vector<double> hy_T = {1000.0};
  WidthFlags hy_w;
  std::string hy_order = "direct";
  QuadFlags hy_q;
  hyb.add("k", hy_k, "outer power");
  hyb.add("l", hy_l, "inner power");
  hyb.add("m", hy_m, "inner exponent");
  hyb.add("T", hy_T, "heights");
  hy_w.attach(hyb, 0.4);
  hyb.choice("order", hy_order, {"direct", "exchanged"}, "integration order (exchanged needs m=1)");
  hy_q.attach(hyb);
  hyb.run = [&] {
    need_nonempty(hy_T, "T");
    table.columns = {"T", "G", "value", "bound_ratio", "est_err", "evals"};
    for (double T : hy_T) {
      zl_hybrid_spec spec;
      zl_hybrid_spec_default(&spec);
      spec.k = hy_k;
      spec.ell = hy_l;
      spec.m = hy_m;
      spec.T = T;
      spec.G = hy_w.at(T);
      spec.outer = hy_q.quad(settings);
      spec.inner = spec.outer;
      zl_moment_result r;
      if (hy_order == "exchanged")
        check(zl_hybrid_moment_exchanged(&spec, &r), "hybrid at T=" + fmt(T));
      else
        check(zl_hybrid_moment(&spec, &r), "hybrid at T=" + fmt(T));
      const double L = std::log(T);
      const double logs = hy_k * hy_k / 4.0 + hy_m * hy_l * hy_l / 4.0;
      const double bound = T * std::pow(spec.G, hy_m) * std::pow(L, logs);
      table.row({T, spec.G, r.value, r.value / bound, r.est_err, r.evals});
    }
  };

  // error-term
  auto& err = make("error-term", "E(T), E_2(T) or E*(T) on a height grid");
  std::string et_kind = "E", et_p4 = "fit";
  double et_lo = 10.0, et_hi = 2000.0;
  std::int64_t et_steps = 1990;
  double fit_lo = 1000.0, fit_hi = 10000.0;
  int fit_count = 40;
  QuadFlags et_q;
  err.choice("kind", et_kind, {"E", "E2", "Estar"}, "error term");
  err.add("T-lo", et_lo, "first height");
  err.add("T-hi", et_hi, "last height");
  err.add("steps", et_steps, "number of intervals in the height grid");
  err.choice("p4", et_p4, {"fit", "leading"}, "P4 for E2: fitted or leading term only");
  err.add("fit-lo", fit_lo, "P4 calibration start");
  err.add("fit-hi", fit_hi, "P4 calibration end");
  err.add("fit-count", fit_count, "P4 calibration points");
  et_q.attach(err);
  err.run = [&] {
    if (et_steps < 1 || !(et_hi >= et_lo)) raise(ZL_CONFIG_INVALID, "need steps >= 1, T-hi >= T-lo");
    const auto q = et_q.quad(settings);
    std::vector<double> heights(static_cast<std::size_t>(et_steps) + 1);
    for (std::size_t i = 0; i < heights.size(); ++i)
      heights[i] = et_lo + (et_hi - et_lo) * static_cast<double>(i) / static_cast<double>(et_steps);
    const int kind = et_kind == "E" ? ZL_ERROR_E : et_kind == "E2" ? ZL_ERROR_E2 : ZL_ERROR_ESTAR;
    Poly_ptr poly;
    if (kind == ZL_ERROR_E2) {
      if (et_p4 == "fit")
        check(zl_polynomial_fit_p4(fit_lo, fit_hi, fit_count, &q, poly.out()), "P4 fit");
      else
        check(zl_polynomial_p4_leading(poly.out()), "P4");
      zl_polynomial_info info;
      check(zl_polynomial_get_info(poly.get(), &info), "P4 info");
      for (int j = 0; j <= info.degree; ++j)
        table.diagnostics.emplace_back("p4_a" + std::to_string(j), info.coeffs[j]);
      table.diagnostics.emplace_back("p4_condition", info.condition_number);
      table.diagnostics.emplace_back("p4_rms_residual", info.fit_rms_residual);
      table.diagnostics.emplace_back("p4_max_residual", info.fit_max_residual);
    } else {
      check(zl_polynomial_p1(poly.out()), "P1");
    }
    std::unique_ptr<Table_ptr> divisors;
    if (kind == ZL_ERROR_ESTAR)
      divisors = std::make_unique<Table_ptr>(
          static_cast<std::int64_t>(std::ceil(4.0 * et_hi / (2.0 * kPi))) + 2);
    std::vector<zl_error_term_sample> out(heights.size());
    check(zl_error_term_scan(kind, heights.data(), heights.size(), poly.get(), &q,
                             divisors ? divisors->get() : nullptr, out.data()),
          "error-term scan");
    table.columns = {"T", "kind", "value", "moment", "main", "ratio"};
    std::int64_t changes = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& s = out[i];
      const double scale = kind == ZL_ERROR_E2
                               ? std::pow(s.T, 2.0 / 3.0) * std::pow(std::log(s.T), 8.0)
                               : std::pow(s.T, 0.25);
      table.row({s.T, et_kind, s.value, s.moment, s.main, s.value / scale});
      if (i > 0 && (out[i - 1].value < 0.0) != (s.value < 0.0)) ++changes;
    }
    table.diagnostics.emplace_back("sign_changes", changes);
  };

  // atkinson
  auto& atk = make("atkinson", "J_1(T, G) against the digamma main term and explicit series");
  std::vector<double> at_T = {2000.0};
  std::vector<double> at_Gexp = {0.35};
  double at_G = 0.0;
  std::string at_kernel = "exact", at_sign = "matched";
  std::int64_t at_nmax = 0;
  QuadFlags at_q;
  atk.add("T", at_T, "heights");
  atk.add("G", at_G, "width (0 selects T^G-exp)");
  atk.add("G-exp", at_Gexp, "width exponents");
  atk.choice("kernel", at_kernel, {"exact", "simplified"}, "series kernel");
  atk.choice("sign", at_sign, {"matched", "printed"}, "series sign");
  atk.add("n-max", at_nmax, "series cutoff (0 = ceil(T G^-2 log T))");
  at_q.attach(atk);
  atk.run = [&] {
    need_nonempty(at_T, "T");
    need_nonempty(at_Gexp, "G-exp");
    const auto q = at_q.quad(settings);
    zl_series_options opts;
    zl_series_options_default(&opts);
    opts.kernel = at_kernel == "simplified" ? ZL_KERNEL_SIMPLIFIED : ZL_KERNEL_EXACT;
    opts.sign = at_sign == "printed" ? ZL_SIGN_PRINTED : ZL_SIGN_MATCHED;
    opts.n_max_override = at_nmax;
    std::vector<std::pair<double, double>> points;
    std::int64_t limit = at_nmax;
    for (double T : at_T) {
      const std::vector<double> gs = at_G > 0.0 ? std::vector<double>{at_G} : std::vector<double>{};
      std::vector<double> widths = gs;
      if (widths.empty())
        for (double e : at_Gexp) widths.push_back(std::pow(T, e));
      for (double G : widths) {
        points.emplace_back(T, G);
        if (G > 0.0 && T > 1.0)
          limit = std::max(limit,
                           static_cast<std::int64_t>(std::ceil(T / (G * G) * std::log(T))) + 1);
      }
    }
    Table_ptr divisors(limit);
    table.columns = {"T",         "G",        "n_max",    "direct",
                     "direct_err", "main_term", "oscillating_sum", "residual"};
    for (auto [T, G] : points) {
      zl_j1_residual r;
      check(zl_j1_residual_eval(T, G, &q, divisors.get(), &opts, &r),
            "atkinson at T=" + fmt(T) + ", G=" + fmt(G));
      table.row({T, G, r.n_max, r.direct, r.direct_err, r.main_term, r.oscillating_sum,
                 r.residual});
    }
  };

  // estar-j1
  auto& est = make("estar-j1", "J_1(t, G) against its E* representation");
  std::vector<double> es_t = {3000.0};
  WidthFlags es_w;
  QuadFlags es_q;
  est.add("t", es_t, "centres");
  es_w.attach(est, 0.3);
  es_q.attach(est);
  est.run = [&] {
    need_nonempty(es_t, "t");
    const auto q = es_q.quad(settings);
    std::int64_t limit = 16;
    for (double t : es_t) {
      const double top = t + es_w.at(t) * std::log(t);
      limit = std::max(limit, static_cast<std::int64_t>(std::ceil(2.0 * top / kPi)) + 2);
    }
    Table_ptr divisors(limit);
    Poly_ptr p1;
    check(zl_polynomial_p1(p1.out()), "P1");
    table.columns = {"t",     "G",         "smoothed",   "smoothed_err",
                     "estar", "estar_err", "difference", "bound"};
    for (double t : es_t) {
      const double G = es_w.at(t);
      zl_moment_result j, e;
      check(zl_smoothed_J(1.0, t, G, &q, &j), "smoothed at t=" + fmt(t));
      check(zl_j1_from_estar(t, G, divisors.get(), p1.get(), &q, &e), "E* at t=" + fmt(t));
      const double L = std::log(t);
      table.row({t, G, j.value, j.est_err, e.value, e.est_err, j.value - e.value, 3.0 * L * L});
    }
  };

  // count3
  auto& c3 = make("count3", "triples with |sqrt m + sqrt n - sqrt k| <= delta sqrt M");
  std::int64_t c3_M = 4, c3_Mp = 4;
  double c3_delta = 1e-9, c3_c = 1.0;
  c3.add("M", c3_M, "range of m is (M, 2M]");
  c3.add("Mp", c3_Mp, "range of n is (M', 2M']");
  c3.add("delta", c3_delta, "tolerance");
  c3.add("c-bound", c3_c, "bound constant");
  c3.run = [&] {
    zl_count_report r;
    std::int64_t exact = 0;
    check(zl_count_lemma3(c3_M, c3_Mp, c3_delta, c3_c, &r), "count3");
    check(zl_count_exact_sqrt_solutions(c3_M, c3_Mp, &exact), "exact solutions");
    table.columns = {"M", "Mp", "delta", "count", "exact", "bound_value", "ratio"};
    table.row({c3_M, c3_Mp, c3_delta, r.count, exact, r.bound_value, r.ratio});
  };

  // count4
  auto& c4 = make("count4", "quadruples with |sum of k-th roots| < delta N^(1/k)");
  std::int64_t c4_N = 16;
  double c4_delta = 1.0 / 64.0, c4_c = 1.0;
  int c4_k = 2;
  std::string c4_method = "pair-sums";
  c4.add("N", c4_N, "range of n_i is (N, 2N]");
  c4.add("delta", c4_delta, "tolerance");
  c4.add("k-root", c4_k, "root order");
  c4.add("c-bound", c4_c, "bound constant");
  c4.choice("counter", c4_method, {"pair-sums", "naive"}, "counting algorithm");
  c4.run = [&] {
    zl_count_report r;
    check(zl_count_lemma4(c4_N, c4_delta, c4_k, c4_c,
                          c4_method == "naive" ? ZL_COUNT_NAIVE : ZL_COUNT_PAIR_SUMS, &r),
          "count4");
    table.columns = {"N", "delta", "k_root", "count", "bound_value", "ratio"};
    table.row({c4_N, c4_delta, std::int64_t{c4_k}, r.count, r.bound_value, r.ratio});
  };

  // jutila
  auto& jut = make("jutila", "mean square of E(x+U) - E(x) over [T, T+H]");
  double ju_T = 3000.0, ju_H = 3000.0;
  std::vector<double> ju_U = {25.0};
  std::string ju_series = "on", ju_norm = "for-e";
  QuadFlags ju_q;
  jut.add("T", ju_T, "start of the range");
  jut.add("H", ju_H, "length of the range");
  jut.add("U", ju_U, "shifts");
  jut.choice("series", ju_series, {"on", "off"}, "also evaluate the divisor series");
  jut.choice("norm", ju_norm, {"for-e", "printed"}, "series normalisation");
  ju_q.attach(jut);
  jut.run = [&] {
    need_nonempty(ju_U, "U");
    const auto q = ju_q.quad(settings);
    const int norm = ju_norm == "printed" ? ZL_NORM_PRINTED : ZL_NORM_FOR_E;
    std::unique_ptr<Table_ptr> divisors;
    if (ju_series == "on") {
      const double smallest = *std::min_element(ju_U.begin(), ju_U.end());
      divisors = std::make_unique<Table_ptr>(
          static_cast<std::int64_t>(std::floor(ju_T / (2.0 * std::max(smallest, 1.0)))) + 1);
    }
    table.columns = {"T",      "H",      "U",     "direct", "direct_err",
                     "series", "cutoff", "ratio", "asymp_ratio"};
    for (double U : ju_U) {
      zl_moment_result d;
      check(zl_diff_meansq(ju_T, ju_H, U, ZL_DIFF_DIRECT, norm, &q, nullptr, &d),
            "direct at U=" + fmt(U));
      double series = std::nan(""), ratio = std::nan("");
      std::int64_t cutoff = 0;
      if (divisors) {
        zl_moment_result s;
        check(zl_diff_meansq(ju_T, ju_H, U, ZL_DIFF_SERIES, norm, &q, divisors->get(), &s),
              "series at U=" + fmt(U));
        series = s.value;
        cutoff = s.evals;
        ratio = d.value / s.value;
      }
      double asymp = std::nan("");
      if (U * U < ju_T) {
        const double lg = std::log(std::sqrt(ju_T) / U);
        asymp = d.value / (ju_H * U * lg * lg * lg);
      }
      table.row({ju_T, ju_H, U, d.value, d.est_err, series, cutoff, ratio, asymp});
    }
  };

  // mellin
  auto& mel = make("mellin", "Mellin transform of |zeta(1/2+ix)|^4");
  std::string me_mode = "eval";
  double me_sigma = 2.0, me_X = 1000.0, me_tau = 0.55, me_rho = 1.5;
  std::vector<double> me_t = {0.0};
  double me_lo = 1.0, me_hi = 50.0;
  int me_steps = 49;
  QuadFlags me_q;
  mel.choice("mode", me_mode, {"eval", "scan", "tail-fit"}, "what to compute");
  mel.add("sigma", me_sigma, "real part of s");
  mel.add("t", me_t, "imaginary parts (eval)");
  mel.add("X", me_X, "truncation point");
  mel.add("tau", me_tau, "tail growth exponent");
  mel.add("rho", me_rho, "exponent reported by scan");
  mel.add("T-lo", me_lo, "scan start or tail-fit x_lo");
  mel.add("T-hi", me_hi, "scan end or tail-fit x_hi");
  mel.add("steps", me_steps, "scan intervals");
  me_q.attach(mel);
  mel.run = [&] {
    const auto q = me_q.quad(settings);
    if (me_mode == "eval") {
      need_nonempty(me_t, "t");
      table.columns = {"sigma", "t", "re", "im", "modulus", "est_err", "tail_bound", "evals"};
      for (double t : me_t) {
        zl_mellin_result r;
        check(zl_z2_eval(me_sigma, t, me_X, me_tau, &q, &r), "Z2 at t=" + fmt(t));
        table.row({me_sigma, t, r.re, r.im, r.modulus, r.est_err, r.tail_bound, r.evals});
      }
    } else if (me_mode == "scan") {
      zl_mellin_scan* scan = nullptr;
      check(zl_z2_meansq_scan(me_sigma, me_lo, me_hi, me_steps, me_X, me_tau, me_rho, &q, &scan),
            "Z2 scan");
      std::unique_ptr<zl_mellin_scan, void (*)(zl_mellin_scan*)> guard(scan, zl_mellin_scan_free);
      zl_mellin_scan_summary sum;
      check(zl_mellin_scan_get_summary(scan, &sum), "scan summary");
      std::vector<zl_mellin_scan_point> pts(sum.points);
      check(zl_mellin_scan_get_points(scan, pts.data(), pts.size()), "scan points");
      table.columns = {"t", "abs2", "partial"};
      for (const auto& p : pts) table.row({p.t, p.abs2, p.partial});
      table.diagnostics.emplace_back("theorem_exponent", sum.theorem_exponent);
      table.diagnostics.emplace_back("fitted_slope", sum.fitted_slope);
    } else {
      double tau = 0.0;
      check(zl_fit_tail_exponent(me_lo, me_hi, &q, &tau), "tail fit");
      table.columns = {"x_lo", "x_hi", "tail_exponent"};
      table.row({me_lo, me_hi, tau});
    }
  };

  // divisor
  auto& div = make("divisor", "Delta(x) and both forms of Delta*(x)");
  double dv_lo = 1.0, dv_hi = 100.0;
  std::int64_t dv_steps = 99;
  div.add("x-lo", dv_lo, "first point");
  div.add("x-hi", dv_hi, "last point");
  div.add("steps", dv_steps, "number of intervals");
  div.run = [&] {
    if (dv_steps < 1 || !(dv_hi >= dv_lo) || !(dv_lo >= 1.0))
      raise(ZL_CONFIG_INVALID, "need steps >= 1 and 1 <= x-lo <= x-hi");
    Table_ptr divisors(static_cast<std::int64_t>(std::ceil(4.0 * dv_hi)) + 1);
    table.columns = {"x", "delta", "delta_star", "delta_star_from_delta"};
    for (std::int64_t i = 0; i <= dv_steps; ++i) {
      const double x = dv_lo + (dv_hi - dv_lo) * static_cast<double>(i) / static_cast<double>(dv_steps);
      double a = 0, b = 0, c = 0;
      check(zl_delta(divisors.get(), x, &a), "Delta");
      check(zl_delta_star(divisors.get(), x, &b), "Delta*");
      check(zl_delta_star_from_delta(divisors.get(), x, &c), "Delta* from Delta");
      table.row({x, a, b, c});
    }
  };

  // plot
  CLI::App* plot = app.add_subcommand("plot", "gnuplot script for a CSV result file");
  std::string pl_input, pl_kind = "ratio-curve";
  plot->add_option("--input", pl_input, "result CSV")->required()->envname("ZETALAB_INPUT");
  plot->add_option("--kind", pl_kind, "plot kind")
      ->check(CLI::IsMember({"ratio-curve", "residual", "sign-changes"}))
      ->envname("ZETALAB_KIND")
      ->capture_default_str();

  std::string emit_plot_script(const std::string& input, const std::string& kind);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ConfigInvalid: " << e.what() << "\n";
    return ZL_CONFIG_INVALID;
  }

  try {
    zl_set_threads(settings.threads);
    if (plot->parsed()) {
      for (char** e = environ; *e != nullptr; ++e) {
        const std::string key = std::string(*e).substr(0, std::string(*e).find('='));
        if (key.rfind(kEnvPrefix, 0) == 0 && !global_env.count(key) && key != "ZETALAB_INPUT" &&
            key != "ZETALAB_KIND")
          raise(ZL_CONFIG_INVALID, "unknown environment key " + key);
      }
      write_atomic(settings.output, emit_plot_script(pl_input, pl_kind));
      return 0;
    }
    Experiment* chosen = nullptr;
    for (auto& ex : experiments)
      if (ex->app()->parsed()) chosen = ex.get();
    if (chosen == nullptr) raise(ZL_CONFIG_INVALID, "no experiment selected");
    for (char** e = environ; *e != nullptr; ++e) {
      const std::string key = std::string(*e).substr(0, std::string(*e).find('='));
      if (key.rfind(kEnvPrefix, 0) == 0 && !global_env.count(key) && !chosen->knows_env(key))
        raise(ZL_CONFIG_INVALID, "unknown environment key " + key + " for " + chosen->name());
    }
    chosen->run();
    const std::string doc = settings.format == "json" ? to_json_doc(*chosen, settings, table)
                                                      : to_csv(*chosen, settings, table);
    write_atomic(settings.output, doc);
    return 0;
  } catch (const CliError& e) {
    std::cerr << zl_status_name(e.status) << ": " << e.message << "\n";
    return static_cast<int>(e.status);
  } catch (const std::exception& e) {
    std::cerr << "Internal: " << e.what() << "\n";
    return ZL_INTERNAL;
  }
}

// ---- plot scripts ----------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string quote_path(const std::string& p) {
  std::string out = "'";
  for (char c : p) out += c == '\'' ? std::string("''") : std::string(1, c);
  return out + "'";
}

}  // namespace

std::string emit_plot_script(const std::string& input, const std::string& kind) {
  std::ifstream f(input, std::ios::binary);
  if (!f) raise(ZL_IO_ERROR, "cannot read " + input);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t skip = 0;
  while (std::getline(f, line)) {
    if (header.empty()) ++skip;
    if (line.empty() || line[0] == '#') continue;
    if (header.empty())
      header = split_csv_line(line);
    else
      rows.push_back(split_csv_line(line));
  }
  if (header.empty()) raise(ZL_SCHEMA_MISMATCH, input + " has no header row");
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    raise(ZL_SCHEMA_MISMATCH, input + " has no column '" + name + "' needed by " + kind);
  };
  auto values = [&](std::size_t col) {
    std::vector<double> v;
    for (const auto& r : rows) {
      if (col >= r.size()) raise(ZL_SCHEMA_MISMATCH, input + " has a short row");
      v.push_back(std::strtod(r[col].c_str(), nullptr));
    }
    return v;
  };

  std::ostringstream s;
  s << "# gnuplot script for " << input << "\n";
  s << "set datafile separator ','\n";
  s << "set key top left\n";
  s << "set grid\n";
  const std::string data = quote_path(input) + " skip " + std::to_string(skip);
  if (kind == "ratio-curve") {
    const auto x = column("T") + 1, y = column("ratio") + 1;
    s << "set xlabel 'T'\nset ylabel 'ratio'\n";
    s << "plot " << data << " using " << x << ":" << y << " with lines title 'ratio'\n";
  } else if (kind == "residual") {
    const auto tcol = column("T");
    const auto x = column("G") + 1, y = column("residual") + 1;
    std::vector<double> Ts = values(tcol);
    std::sort(Ts.begin(), Ts.end());
    Ts.erase(std::unique(Ts.begin(), Ts.end()), Ts.end());
    s << "set xlabel 'G'\nset ylabel 'residual'\n";
    s << "plot " << data << " using " << x << ":" << y
      << " with linespoints title 'residual'";
    for (double T : Ts)
      s << ", \\\n     " << fmt(std::log(T)) << " with lines dashtype 2 title 'log T, T = "
        << fmt(T) << "'";
    s << "\n";
  } else {
    const auto xc = column("T"), yc = column("value");
    const auto v = values(yc);
    std::int64_t changes = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if ((v[i - 1] < 0.0) != (v[i] < 0.0)) ++changes;
    s << "set xlabel 'T'\nset ylabel 'value'\n";
    s << "set title '" << changes << " sign changes'\n";
    s << "set xzeroaxis\n";
    s << "plot " << data << " using " << xc + 1 << ":" << yc + 1
      << " with lines title 'value'\n";
  }
  return s.str();
}
