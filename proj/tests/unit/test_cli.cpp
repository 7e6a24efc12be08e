#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ZETALAB_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string header_of(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') return line;
  return {};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("zetalab_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("hybrid schema") {
    const auto r = run("hybrid --k 2 --l 2 --m 1 --T 1000 --G-exp 0.4");
    REQUIRE(r.status == 0);
    CHECK(header_of(r.out) == "T,G,value,bound_ratio,est_err,evals");
    CHECK(r.out.find("# G-exp=0.40000000000000002") != std::string::npos);
    CHECK(r.out.find("# rs-order=4") != std::string::npos);
  }

  TEST_CASE("count3 row") {
    const auto r = run("count3 --M 4 --Mp 4 --delta 1e-9");
    REQUIRE(r.status == 0);
    CHECK(header_of(r.out) == "M,Mp,delta,count,exact,bound_value,ratio");
    CHECK(r.out.find("\n4,4,1.0000000000000001e-09,4,4,") != std::string::npos);
  }

  TEST_CASE("rerun gives identical bytes") {
    const auto a = scratch("a.csv"), b = scratch("b.csv");
    REQUIRE(run("--threads 1 error-term --T-hi 600 --steps 50 -o " + a.string()).status == 0);
    REQUIRE(run("--threads 5 error-term --T-hi 600 --steps 50 -o " + b.string()).status == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
  }

  TEST_CASE("json document") {
    const auto r = run("--format json count4 --N 10 --delta 0.01");
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["experiment"] == "count4");
    CHECK(doc["config"]["parameters"]["N"] == 10);
    CHECK(doc["results"].size() == 1);
    CHECK(doc.contains("diagnostics"));
  }

  TEST_CASE("environment overrides sit below flags") {
    auto r = run("count4 --N 5");
    const auto base = r.out;
    r = run("count4");
    CHECK(r.out != base);
    const std::string env = "env ZETALAB_N=5 " + std::string(ZETALAB_CLI) + " count4";
    FILE* p = popen(env.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    pclose(p);
    CHECK(out == base);
    const std::string both = "env ZETALAB_N=9 " + std::string(ZETALAB_CLI) + " count4 --N 5";
    p = popen(both.c_str(), "r");
    out.clear();
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    pclose(p);
    CHECK(out == base);
  }

  TEST_CASE("unknown keys are rejected") {
    auto r = run("count3 --bogus 1");
    CHECK(r.status == 9);
    CHECK(r.out.find("ConfigInvalid") != std::string::npos);
    const std::string cmd = "env ZETALAB_BOGUS=1 " + std::string(ZETALAB_CLI) + " count3 > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(raw) == 9);
  }

  TEST_CASE("module errors propagate") {
    const auto r = run("atkinson --T 5000 --G 3000");
    CHECK(r.status == 5);
    CHECK(r.out.rfind("DomainError:", 0) == 0);
    const auto m = run("mellin --sigma 1.25");
    CHECK(m.status == 7);
    CHECK(m.out.rfind("TailDiverges:", 0) == 0);
  }

  TEST_CASE("failed runs leave no output file") {
    const auto out = scratch("never.csv");
    CHECK(run("mellin --sigma 1.25 -o " + out.string()).status != 0);
    CHECK_FALSE(fs::exists(out));
  }

  TEST_CASE("plot scripts") {
    const auto et = scratch("et.csv");
    REQUIRE(run("error-term --T-hi 300 --steps 29 -o " + et.string()).status == 0);
    auto r = run("plot --kind ratio-curve --input " + et.string());
    REQUIRE(r.status == 0);
    std::size_t series = 0;
    for (std::size_t pos = r.out.find(" title "); pos != std::string::npos;
         pos = r.out.find(" title ", pos + 1))
      ++series;
    CHECK(series == 1);
    CHECK(r.out.find("plot '" + et.string() + "'") != std::string::npos);

    r = run("plot --kind residual --input " + et.string());
    CHECK(r.status == 10);
    CHECK(r.out.rfind("SchemaMismatch:", 0) == 0);

    const auto at = scratch("at.csv");
    REQUIRE(run("atkinson --T 2000 --G-exp 0.3,0.35 -o " + at.string()).status == 0);
    r = run("plot --kind residual --input " + at.string());
    REQUIRE(r.status == 0);
    CHECK(r.out.find("7.6009024595420822 with lines") != std::string::npos);  // log 2000

    r = run("plot --kind sign-changes --input " + et.string());
    REQUIRE(r.status == 0);
    CHECK(r.out.find("sign changes") != std::string::npos);
  }
}
