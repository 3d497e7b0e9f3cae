#include "spencer/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

using namespace spencer;
using namespace spencer::io;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("spencer_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void parse(const std::string& text) { parse_run_config(text); }

}  // namespace

TEST_CASE("number formatting round-trips doubles") {
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double v = d(testing::rng()) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-3.0) == "-3");
}

TEST_CASE("field dump round trip with sidecar") {
  const auto dir = scratch("field");
  const spectral::GridSpec g{16, 2.5};
  std::vector<double> v(g.points());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * i) * 1e-3 + i;
  write_field(dir / "sub" / "zeta", g, v, 1.25, "vorticity");
  CHECK(fs::file_size(dir / "sub" / "zeta.bin") == g.points() * 8);
  const auto side = nlohmann::json::parse(read_bytes(dir / "sub" / "zeta.json"));
  CHECK(side["N"] == 16);
  CHECK(side["L"] == 2.5);
  CHECK(side["t"] == 1.25);
  CHECK(side["quantity"] == "vorticity");
  CHECK(side["dtype"] == "float64");
  const auto back = read_field(dir / "sub" / "zeta");
  CHECK(back.grid == g);
  CHECK(back.t == 1.25);
  CHECK(back.quantity == "vorticity");
  CHECK(back.values == v);
  // Little-endian float64 at offset 8 is element 1.
  const auto raw = read_bytes(dir / "sub" / "zeta.bin");
  double second;
  std::memcpy(&second, raw.data() + 8, 8);
  CHECK(second == v[1]);
  CHECK_THROWS_AS(write_field(dir / "bad", g, std::vector<double>(3), 0.0, "x"), DimensionMismatch);
  CHECK_THROWS_AS(read_field(dir / "missing"), IoError);
}

TEST_CASE("strata dump stores int32") {
  const auto dir = scratch("strata");
  const spectral::GridSpec g{16, 1.0};
  inv::StrataGrid s{16, std::vector<std::int32_t>(256, 2)};
  s.labels[5] = 0;
  write_strata(dir / "s", g, s, 0.5);
  CHECK(fs::file_size(dir / "s.bin") == 256 * 4);
  CHECK(nlohmann::json::parse(read_bytes(dir / "s.json"))["dtype"] == "int32");
}

TEST_CASE("PGM heatmap") {
  const auto dir = scratch("pgm");
  std::vector<double> v(16 * 16);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  write_pgm(dir / "a.pgm", 16, v);
  const auto bytes = read_bytes(dir / "a.pgm");
  const std::string header = "P5\n16 16\n255\n";
  REQUIRE(bytes.size() == header.size() + 256);
  CHECK(bytes.substr(0, header.size()) == header);
  // Top row of the image is the largest y: values 240..255.
  CHECK(static_cast<unsigned char>(bytes[header.size()]) == 240);
  CHECK(static_cast<unsigned char>(bytes[header.size() + 15]) == 255);
  CHECK(static_cast<unsigned char>(bytes.back()) == 15);
  // Constant field does not divide by zero.
  write_pgm(dir / "c.pgm", 16, std::vector<double>(256, 4.0));
  CHECK(fs::file_size(dir / "c.pgm") == header.size() + 256);
}

TEST_CASE("CSV series round trip is bit exact") {
  const auto dir = scratch("csv");
  inv::InvariantSeries s{{"r1", "r2"}, {}};
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int i = 0; i < 20; ++i)
    s.records.push_back({0.1 * i, d(testing::rng()), {d(testing::rng()) / 3.0, d(testing::rng()) * 1e-17}, d(testing::rng()), 1e-15 * i});
  write_series_csv(dir / "s.csv", s);
  const auto text = read_text(dir / "s.csv");
  CHECK(text.substr(0, text.find('\n')) == "t,I0,I2,div_max,circ_r1,circ_r2");
  const auto back = read_series_csv(dir / "s.csv");
  CHECK(back.curve_labels == s.curve_labels);
  REQUIRE(back.records.size() == s.records.size());
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    CHECK(back.records[i].t == s.records[i].t);
    CHECK(back.records[i].I0 == s.records[i].I0);
    CHECK(back.records[i].I1 == s.records[i].I1);
    CHECK(back.records[i].I2 == s.records[i].I2);
    CHECK(back.records[i].div_max == s.records[i].div_max);
  }
  write_series_csv(dir / "t.csv", back);
  CHECK(read_bytes(dir / "t.csv") == read_bytes(dir / "s.csv"));
}

TEST_CASE("malformed CSV") {
  const auto dir = scratch("badcsv");
  write_text(dir / "a.csv", "t,I0,I2\n0,1,2\n");
  CHECK_THROWS_AS(read_series_csv(dir / "a.csv"), ConfigError);
  write_text(dir / "b.csv", "t,I0,I2,div_max,circ_a\n0,1,2,3\n");
  CHECK_THROWS_AS(read_series_csv(dir / "b.csv"), ConfigError);
  write_text(dir / "c.csv", "t,I0,I2,div_max,circ_a\n0,1,x,3,4\n");
  CHECK_THROWS_AS(read_series_csv(dir / "c.csv"), ConfigError);
  write_text(dir / "d.csv", "");
  CHECK_THROWS_AS(read_series_csv(dir / "d.csv"), ConfigError);
  CHECK_THROWS_AS(read_series_csv(dir / "nope.csv"), IoError);
}

TEST_CASE("run config parsing") {
  const auto cfg = parse_run_config(R"({"grid":{"N":64,"L":6.0},"dt":0.01,"t_end":2,
    "vortices":[{"x":1,"y":2,"alpha":3,"sigma":0.5}],
    "curves":[{"cx":1,"cy":2,"radius":0.5},{"cx":3,"cy":3,"radius":1,"M":64,"label":"big"}]})");
  CHECK(cfg.grid.n == 64);
  CHECK(cfg.grid.length == 6.0);
  CHECK(cfg.dt == 0.01);
  CHECK(cfg.t_end == 2.0);
  CHECK(cfg.vortices.size() == 1);
  CHECK(cfg.curves[0].label == "c0");
  CHECK(cfg.curves[0].m == 256);
  CHECK(cfg.curves[1].label == "big");
  CHECK(cfg.make_curves()[1].points.size() == 64);
  CHECK(cfg.make_vorticity().values.size() == 64 * 64);

  const auto autodt = parse_run_config(R"({"grid":{"N":32,"L":1},"dt":"auto"})");
  CHECK(!autodt.dt.has_value());

  CHECK_THROWS_AS(parse(R"({"grid":{"N":32,"L":1},"bogus":1})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"grid":{"N":32,"L":1,"M":3}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"grid":{"N":48,"L":1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"grid":{"N":32,"L":1},"dt":-1})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"grid":{"N":32,"L":1},"t_end":"soon"})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"grid":{"N":32,"L":1},"vortices":[{"x":1}]})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"grid":{"N":32,"L":1},"curves":[{"cx":0,"cy":0,"radius":1,"M":4}]})"), ConfigError);
  CHECK_THROWS_AS(parse("{not json"), ConfigError);
}

TEST_CASE("presets load") {
  const auto g = load_preset("gaussian");
  CHECK(g.grid.n == 128);
  CHECK(g.curves.size() == 2);
  const auto a = load_preset("appendix_d");
  CHECK(a.vortices.size() == 3);
  CHECK(a.curves.size() == 3);
  CHECK_THROWS_AS(load_preset("nonexistent"), ConfigError);
}
