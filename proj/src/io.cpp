#include "spencer/io.hpp"

#include "spencer/liealg.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace spencer::io {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

template <class T>
std::string little_endian_bytes(const std::vector<T>& values) {
  std::string bytes(values.size() * sizeof(T), '\0');
  std::memcpy(bytes.data(), values.data(), bytes.size());
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < bytes.size(); i += sizeof(T)) std::reverse(bytes.begin() + i, bytes.begin() + i + sizeof(T));
  return bytes;
}

fs::path with_suffix(const fs::path& stem, const char* ext) { return fs::path(stem.string() + ext); }

void write_dump(const fs::path& stem, const std::string& payload, json sidecar) {
  write_text(with_suffix(stem, ".bin"), payload);
  write_text(with_suffix(stem, ".json"), sidecar.dump(2) + "\n");
}

}  // namespace

void write_field(const fs::path& stem, const spectral::GridSpec& g, const std::vector<double>& values, double t,
                 const std::string& quantity) {
  if (values.size() != g.points()) throw DimensionMismatch("field dump: value count differs from N*N");
  write_dump(stem, little_endian_bytes(values),
             json{{"N", g.n}, {"L", g.length}, {"t", t}, {"quantity", quantity}, {"dtype", "float64"}});
}

void write_strata(const fs::path& stem, const spectral::GridSpec& g, const inv::StrataGrid& strata, double t) {
  if (strata.labels.size() != g.points()) throw DimensionMismatch("strata dump: label count differs from N*N");
  write_dump(stem, little_endian_bytes(strata.labels),
             json{{"N", g.n}, {"L", g.length}, {"t", t}, {"quantity", "strata"}, {"dtype", "int32"}});
}

FieldDump read_field(const fs::path& stem) {
  FieldDump d;
  try {
    const auto meta = json::parse(read_text(with_suffix(stem, ".json")));
    d.grid.n = meta.at("N").get<std::size_t>();
    d.grid.length = meta.at("L").get<double>();
    d.t = meta.at("t").get<double>();
    d.quantity = meta.at("quantity").get<std::string>();
    if (meta.value("dtype", "float64") != "float64") throw ConfigError("read_field supports float64 dumps only");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed field sidecar: ") + e.what());
  }
  const std::string bytes = read_text(with_suffix(stem, ".bin"));
  if (bytes.size() != d.grid.points() * sizeof(double)) throw IoError("field payload size does not match sidecar");
  d.values.resize(d.grid.points());
  std::string raw = bytes;
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < raw.size(); i += 8) std::reverse(raw.begin() + i, raw.begin() + i + 8);
  std::memcpy(d.values.data(), raw.data(), raw.size());
  return d;
}

void write_pgm(const fs::path& path, std::size_t n, const std::vector<double>& values) {
  if (values.size() != n * n) throw DimensionMismatch("pgm: value count differs from N*N");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = values.empty() ? 0.0 : *hi - *lo;
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  out.reserve(out.size() + values.size());
  // PGM rows run top to bottom; flip so y increases upward.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double v = values[(n - 1 - r) * n + c];
      const double s = span > 0.0 ? (v - *lo) / span : 0.5;
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(s * 255.0))));
    }
  write_text(path, out);
}

// ---- CSV -------------------------------------------------------------------

std::string series_header(const std::vector<std::string>& curve_labels) {
  std::string h = "t,I0,I2,div_max";
  for (const auto& l : curve_labels) h += ",circ_" + l;
  return h;
}

std::string series_row(const inv::InvariantRecord& r) {
  std::string s = format_number(r.t) + "," + format_number(r.I0) + "," + format_number(r.I2) + "," + format_number(r.div_max);
  for (double c : r.I1) s += "," + format_number(c);
  return s;
}

void write_series_csv(const fs::path& path, const inv::InvariantSeries& series) {
  std::string text = series_header(series.curve_labels) + "\n";
  for (const auto& r : series.records) {
    if (r.I1.size() != series.curve_labels.size()) throw DimensionMismatch("record circulation count differs from labels");
    text += series_row(r) + "\n";
  }
  write_text(path, text);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("CSV line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

}  // namespace

inv::InvariantSeries read_series_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("CSV " + path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto head = split(line, ',');
  static const std::vector<std::string> fixed{"t", "I0", "I2", "div_max"};
  if (head.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), head.begin()))
    throw ConfigError("CSV header must start with t,I0,I2,div_max");
  inv::InvariantSeries series;
  for (std::size_t i = fixed.size(); i < head.size(); ++i) {
    if (head[i].rfind("circ_", 0) != 0) throw ConfigError("unexpected CSV column '" + head[i] + "'");
    series.curve_labels.push_back(head[i].substr(5));
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != head.size()) throw ConfigError("CSV line " + std::to_string(line_no) + ": wrong column count");
    inv::InvariantRecord r;
    r.t = parse_double(cells[0], line_no);
    r.I0 = parse_double(cells[1], line_no);
    r.I2 = parse_double(cells[2], line_no);
    r.div_max = parse_double(cells[3], line_no);
    for (std::size_t i = fixed.size(); i < cells.size(); ++i) r.I1.push_back(parse_double(cells[i], line_no));
    series.records.push_back(std::move(r));
  }
  return series;
}

// ---- run config --------------------------------------------------------------

std::vector<euler::MarkerCurve> RunConfig::make_curves() const {
  std::vector<euler::MarkerCurve> out;
  for (const auto& c : curves) out.push_back(euler::MarkerCurve::circle(c.label, {c.cx, c.cy}, c.radius, c.m, grid.length));
  return out;
}

euler::VorticityField RunConfig::make_vorticity() const { return euler::gaussian_vorticity(grid, vortices); }

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : obj.items())
    if (!ok.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  try {
    const json doc = json::parse(text);
    reject_unknown(doc, {"grid", "dt", "t_end", "dealias", "vortices", "curves", "output_every", "cfl_fraction", "description"},
                   "run config");
    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      reject_unknown(g, {"N", "L"}, "grid");
      cfg.grid.n = g.value("N", cfg.grid.n);
      cfg.grid.length = g.value("L", cfg.grid.length);
    }
    if (doc.contains("dt")) {
      const auto& dt = doc["dt"];
      if (dt.is_string()) {
        if (dt.get<std::string>() != "auto") throw ConfigError("dt must be a number or \"auto\"");
      } else {
        cfg.dt = dt.get<double>();
        if (!(*cfg.dt > 0.0)) throw ConfigError("dt must be positive");
      }
    }
    cfg.t_end = doc.value("t_end", cfg.t_end);
    cfg.dealias = doc.value("dealias", cfg.dealias);
    cfg.output_every = doc.value("output_every", cfg.output_every);
    cfg.cfl_fraction = doc.value("cfl_fraction", cfg.cfl_fraction);
    for (const auto& v : doc.value("vortices", json::array())) {
      reject_unknown(v, {"x", "y", "alpha", "sigma"}, "vortex");
      euler::GaussianVortex gv{v.at("x").get<double>(), v.at("y").get<double>(), v.at("alpha").get<double>(),
                               v.at("sigma").get<double>()};
      if (!(gv.sigma > 0.0)) throw ConfigError("vortex sigma must be positive");
      cfg.vortices.push_back(gv);
    }
    std::size_t idx = 0;
    for (const auto& c : doc.value("curves", json::array())) {
      reject_unknown(c, {"cx", "cy", "radius", "M", "label"}, "curve");
      CurveSpec cs;
      cs.label = c.value("label", "c" + std::to_string(idx));
      cs.cx = c.at("cx").get<double>();
      cs.cy = c.at("cy").get<double>();
      cs.radius = c.at("radius").get<double>();
      cs.m = c.value("M", cs.m);
      if (cs.m < 8) throw ConfigError("curve M must be at least 8");
      if (cs.label.empty() || cs.label.find_first_of(",\n\r") != std::string::npos)
        throw ConfigError("curve label must be non-empty and free of commas");
      cfg.curves.push_back(cs);
      ++idx;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  cfg.grid.validate();
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (cfg.output_every == 0) throw ConfigError("output_every must be positive");
  if (!(cfg.cfl_fraction > 0.0 && cfg.cfl_fraction <= 1.0)) throw ConfigError("cfl_fraction must lie in (0, 1]");
  return cfg;
}

RunConfig load_run_config(const fs::path& path) { return parse_run_config(read_text(path)); }

RunConfig load_preset(const std::string& name) {
  const auto file = lie::data_dir() / "presets" / (name + ".json");
  if (!fs::exists(file)) throw ConfigError("unknown preset '" + name + "' (looked for " + file.string() + ")");
  return load_run_config(file);
}

}  // namespace spencer::io
