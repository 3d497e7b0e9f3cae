#include "spencer/cli.hpp"
#include "spencer/io.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

using namespace spencer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int rc;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int rc = cli::run(args, o, e);
  return {rc, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("spencer_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const fs::path kData = SPENCER_TEST_DATA_DIR;

}  // namespace

TEST_CASE("lie verify") {
  const auto dir = scratch("verify");
  const auto r = invoke({"--out", dir.string(), "lie", "verify", "--algebra", "su2"});
  CHECK(r.rc == 0);
  CHECK(r.out.find("[e1,e2] = e3") != std::string::npos);
  CHECK(r.out.find("jacobi residual: 0") != std::string::npos);
  CHECK(r.out.find("semisimple: yes") != std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(dir / "lie_verify.json"));
  CHECK(doc["jacobi_residual"] == "0");

  const auto ab = invoke({"lie", "verify", "--algebra", "abelian2"});
  CHECK(ab.rc == 0);
  CHECK(ab.out.find("semisimple: no") != std::string::npos);
  CHECK(ab.out.find("center dimension: 2") != std::string::npos);
}

TEST_CASE("lie betti and cohomology") {
  const auto b = invoke({"lie", "betti", "--algebra", "su2", "--base", "1,2,1"});
  CHECK(b.rc == 0);
  CHECK(b.out.find("betti: 1,5,13") != std::string::npos);
  const auto c = invoke({"lie", "cohomology", "--algebra", "su2", "--p", "0"});
  CHECK(c.rc == 0);
  CHECK(c.out.find("1,0,0,1") != std::string::npos);
  const auto j = invoke({"--json", "lie", "betti", "--algebra", "su2", "--base", "1,0,1", "--factor", "1,2,2", "--nilpotency", "0"});
  CHECK(j.rc == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["betti"] == std::vector<long>{1, 2, 3});
}

TEST_CASE("lie delta") {
  const auto r = invoke({"lie", "delta", "--algebra", "sl2", "--tensor", "h*e", "--times", "2"});
  CHECK(r.rc == 0);
  const auto z = invoke({"lie", "delta", "--algebra", "abelian2", "--tensor", "e1*e2"});
  CHECK(z.rc == 0);
  CHECK(z.out.find('0') != std::string::npos);
  CHECK(invoke({"lie", "delta", "--algebra", "su2", "--tensor", "e9"}).rc == 1);
}

TEST_CASE("unknown algebra and bad arguments exit 1") {
  CHECK(invoke({"lie", "verify", "--algebra", "e8_not_here"}).rc == 1);
  CHECK(invoke({"lie", "betti", "--algebra", "su2", "--base", "1,x"}).rc == 1);
  CHECK(invoke({"frobnicate"}).rc == 1);
  CHECK(invoke({}).rc == 1);
  CHECK(invoke({"--help"}).rc == 0);
}

TEST_CASE("cartan run on su2 matches the exact rotation") {
  const auto dir = scratch("cartan");
  io::write_text(dir / "c.json", R"({"algebra":"su2","connection":{"preset":"constant","params":{"a":[0,0,1]}},
    "lambda0":[1,0,0],"v":[1],"ds":0.001,"s_end":6.283185307179586,"scheme":"rk4"})");
  const auto r = invoke({"--out", (dir / "o").string(), "cartan", (dir / "c.json").string()});
  REQUIRE(r.rc == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "o" / "cartan_summary.json"));
  const auto lam = doc["lambda_final"].get<std::vector<double>>();
  CHECK(std::abs(lam[0] - 1.0) <= 1e-8);
  CHECK(std::abs(lam[1]) <= 1e-8);
  CHECK(std::abs(lam[2]) <= 1e-8);
  CHECK(doc["max_exact_deviation"].get<double>() <= 1e-8);
  const auto csv = slurp(dir / "o" / "cartan.csv");
  CHECK(csv.substr(0, csv.find('\n')).find("s,") == 0);
}

TEST_CASE("cartan abelian run keeps lambda constant") {
  const auto dir = scratch("cartan_ab");
  io::write_text(dir / "c.json", R"({"algebra":"abelian3","connection":{"preset":"abelian_zero"},
    "lambda0":[1,2,3],"v":[1],"ds":0.1,"s_end":1,"scheme":"euler_paper"})");
  const auto r = invoke({"--out", (dir / "o").string(), "cartan", (dir / "c.json").string()});
  REQUIRE(r.rc == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "o" / "cartan_summary.json"));
  CHECK(doc["lambda_final"].get<std::vector<double>>() == std::vector<double>{1, 2, 3});
}

TEST_CASE("cartan CFL violation exits 2, auto-ds recovers") {
  const auto dir = scratch("cartan_cfl");
  io::write_text(dir / "c.json", R"({"algebra":"su2","connection":{"preset":"constant","params":{"a":[0,0,1]}},
    "lambda0":[1,0,0],"v":[1],"ds":1.5,"s_end":3})");
  CHECK(invoke({"cartan", (dir / "c.json").string()}).rc == 2);
  CHECK(invoke({"cartan", (dir / "c.json").string(), "--auto-ds"}).rc == 0);
  io::write_text(dir / "bad.json", R"({"algebra":"su2","connection":{"preset":"constant","params":{"a":[0,0,1]}},
    "lambda0":[1,0,0],"v":[1],"ds":0.1,"s_end":3,"extra":true})");
  CHECK(invoke({"cartan", (dir / "bad.json").string()}).rc == 1);
}

TEST_CASE("euler run with no vortices stays at zero") {
  const auto dir = scratch("zero");
  io::write_text(dir / "z.json", R"({"grid":{"N":16,"L":6.283185307179586},"dt":0.1,"t_end":0.5,
    "curves":[{"cx":3,"cy":3,"radius":1,"M":32,"label":"a"}],"output_every":1})");
  const auto r = invoke({"--out", (dir / "o").string(), "euler", "run", (dir / "z.json").string()});
  REQUIRE(r.rc == 0);
  const auto s = io::read_series_csv(dir / "o" / "series.csv");
  CHECK(s.records.size() == 6);
  for (const auto& rec : s.records) {
    CHECK(rec.I0 == 0.0);
    CHECK(rec.I2 == 0.0);
    CHECK(rec.I1[0] == 0.0);
  }
  CHECK(s.records.back().t == 0.5);
  CHECK(fs::exists(dir / "o" / "zeta_final.bin"));
  CHECK(fs::exists(dir / "o" / "zeta_final.pgm"));
}

TEST_CASE("three-vortex preset signs after a short run") {
  const auto dir = scratch("multi");
  const auto r = invoke({"--out", dir.string(), "euler", "multivortex", "--N", "64", "--t-end", "0.2", "--no-dump"});
  REQUIRE(r.rc == 0);
  const auto s = io::read_series_csv(dir / "series.csv");
  const auto& last = s.records.back().I1;
  REQUIRE(last.size() == 3);
  CHECK(last[0] > 0.0);
  CHECK(last[1] < 0.0);
  CHECK(last[2] > 0.0);
  CHECK(!fs::exists(dir / "zeta_final.bin"));
}

TEST_CASE("euler runs are deterministic") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& d : {a, b})
    REQUIRE(invoke({"--out", d.string(), "euler", "gaussian", "--N", "32", "--t-end", "0.5", "--no-dump"}).rc == 0);
  CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
  CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
}

TEST_CASE("euler errors") {
  CHECK(invoke({"euler", "run", "/nonexistent/run.json"}).rc == 3);
  const auto dir = scratch("euler_bad");
  io::write_text(dir / "b.json", R"({"grid":{"N":16,"L":1},"surprise":1})");
  CHECK(invoke({"euler", "run", (dir / "b.json").string()}).rc == 1);
  io::write_text(dir / "cfl.json", R"({"grid":{"N":32,"L":6.283185307179586},"dt":5.0,"t_end":10,
    "vortices":[{"x":3,"y":3,"alpha":6,"sigma":0.5}]})");
  CHECK(invoke({"euler", "run", (dir / "cfl.json").string()}).rc == 2);
  CHECK(invoke({"euler", "gaussian", "--N", "20"}).rc == 1);
  CHECK(invoke({"euler", "gaussian", "--coupling", "sideways"}).rc == 1);
}

TEST_CASE("report on a constant series is all zeros") {
  const auto dir = scratch("report_const");
  io::write_text(dir / "s.csv", "t,I0,I2,div_max,circ_a\n0,1.5,2,0,3\n1,1.5,2,0,3\n");
  const auto r = invoke({"report", (dir / "s.csv").string()});
  REQUIRE(r.rc == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.ends_with(" 0.000000e+00"));
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(r.out.find("I1 circ_a") != std::string::npos);
}

TEST_CASE("report errors") {
  const auto dir = scratch("report_bad");
  io::write_text(dir / "one.csv", "t,I0,I2,div_max\n0,1,2,0\n");
  CHECK(invoke({"report", (dir / "one.csv").string()}).rc == 1);
  io::write_text(dir / "junk.csv", "hello\n");
  CHECK(invoke({"report", (dir / "junk.csv").string()}).rc == 1);
  CHECK(invoke({"report", (dir / "missing.csv").string()}).rc == 3);
}

TEST_CASE("report reproduces the stored report bit for bit") {
  const auto dir = scratch("golden");
  const auto r = invoke({"--out", dir.string(), "report", (kData / "golden_gaussian_series.csv").string()});
  REQUIRE(r.rc == 0);
  const auto golden = slurp(kData / "golden_gaussian_report.txt");
  CHECK(r.out == golden);
  CHECK(slurp(dir / "report.txt") == golden);
}

TEST_CASE("a fresh run reproduces the stored series") {
  const auto dir = scratch("golden_run");
  REQUIRE(invoke({"--out", dir.string(), "euler", "gaussian", "--N", "64", "--t-end", "1"}).rc == 0);
  CHECK(slurp(dir / "series.csv") == slurp(kData / "golden_gaussian_series.csv"));
  CHECK(slurp(dir / "report.txt") == slurp(kData / "golden_gaussian_report.txt"));
}
