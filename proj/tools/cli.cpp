#include "spencer/cli.hpp"

#include "spencer/cartan.hpp"
#include "spencer/io.hpp"
#include "spencer/liealg.hpp"
#include "spencer/runner.hpp"
#include "spencer/symcomplex.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace spencer::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string out_dir;
  bool json = false;
  bool verbose = false;
};

std::string join(const auto& values, const char* sep = ",") {
  std::ostringstream os;
  bool first = true;
  for (const auto& v : values) {
    if (!first) os << sep;
    os << v;
    first = false;
  }
  return os.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    out.push_back(cur.substr(b, e - b + 1));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split_list(text)) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      if (s.front() == '-') throw std::invalid_argument(s);
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a non-negative integer: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("not a non-negative integer: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw ConfigError("not a rational number: '" + s + "'");
  }
}

lie::LieVector parse_lie_vector(const lie::LieAlgebra& g, const std::string& text) {
  std::vector<Rational> c;
  for (const auto& s : split_list(text)) c.push_back(parse_rational(s));
  if (c.size() != g.dim()) throw ConfigError("vector has " + std::to_string(c.size()) + " entries, algebra dim is " + std::to_string(g.dim()));
  return lie::LieVector(std::move(c));
}

std::string format_vector(const lie::LieAlgebra& g, const lie::LieVector& v) {
  return sym::format_sym_tensor(g, sym::SymTensor::from_vector(v));
}

fs::path out_path(const Globals& gl, const std::string& name) { return fs::path(gl.out_dir) / name; }

void write_json_file(const Globals& gl, const std::string& name, const json& doc) {
  if (!gl.out_dir.empty()) io::write_text(out_path(gl, name), doc.dump(2) + "\n");
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

// ---- lie ------------------------------------------------------------------

int cmd_lie_verify(const Globals& gl, const std::string& algebra, std::ostream& out) {
  const auto g = lie::resolve_algebra(algebra);
  const std::size_t n = g.dim();
  json brackets = json::array();
  std::ostringstream table;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto br = lie::bracket(g, lie::LieVector::basis(n, a), lie::LieVector::basis(n, b));
      const auto text = format_vector(g, br);
      table << "  [" << g.labels()[a] << "," << g.labels()[b] << "] = " << text << "\n";
      brackets.push_back({{"a", g.labels()[a]}, {"b", g.labels()[b]}, {"bracket", text}});
    }
  const auto jac = lie::jacobi_residual(g);
  const auto killing = lie::killing_form(g);
  const auto center = lie::center_basis(g);
  const bool semisimple = lie::is_semisimple(g);

  json kf = json::array();
  for (std::size_t a = 0; a < n; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < n; ++b) row.push_back(to_string(killing(a, b)));
    kf.push_back(row);
  }
  const json doc{{"algebra", g.name()},   {"dim", n},           {"labels", g.labels()},
                 {"brackets", brackets},  {"jacobi_residual", to_string(jac)},
                 {"killing_form", kf},    {"semisimple", semisimple}, {"center_dim", center.size()}};
  if (gl.json) {
    out << doc.dump(2) << "\n";
  } else {
    out << "algebra " << g.name() << " (dim " << n << "; basis " << join(g.labels(), " ") << ")\n";
    out << "brackets:\n" << table.str();
    out << "jacobi residual: " << to_string(jac) << "\n";
    out << "killing form:\n";
    for (std::size_t a = 0; a < n; ++a) {
      out << "  ";
      for (std::size_t b = 0; b < n; ++b) out << std::setw(6) << to_string(killing(a, b));
      out << "\n";
    }
    out << "semisimple: " << (semisimple ? "yes" : "no") << "\n";
    out << "center dimension: " << center.size() << "\n";
  }
  write_json_file(gl, "lie_verify.json", doc);
  return kOk;
}

int cmd_lie_cohomology(const Globals& gl, const std::string& algebra, std::size_t p, std::optional<std::size_t> max_q,
                       std::ostream& out) {
  const auto g = lie::resolve_algebra(algebra);
  const std::size_t qmax = max_q.value_or(g.dim());
  if (qmax > g.dim()) throw ConfigError("max-q exceeds the algebra dimension");
  std::vector<std::size_t> dims;
  for (std::size_t q = 0; q <= qmax; ++q) dims.push_back(sym::ce_cohomology_dim(g, p, q));
  const json doc{{"algebra", g.name()}, {"p", p}, {"dims", dims}};
  if (gl.json)
    out << doc.dump(2) << "\n";
  else
    out << "dim H^q(" << g.name() << ", Sym^" << p << ") for q = 0.." << qmax << ": " << join(dims) << "\n";
  write_json_file(gl, "lie_cohomology.json", doc);
  return kOk;
}

int cmd_lie_betti(const Globals& gl, const std::string& algebra, const std::string& base_text, const std::string& factor,
                  std::size_t nil_degree, std::ostream& out) {
  const auto g = lie::resolve_algebra(algebra);
  const auto base = parse_uint_list(base_text);
  const std::size_t max_p = base.size() - 1;
  sym::BettiFactorTable table;
  if (factor == "sym") {
    table = sym::sym_dimension_factor(g, max_p);
  } else if (factor == "whitehead") {
    table = sym::whitehead_factor(g, max_p);
  } else {
    table.preset = "custom";
    for (auto v : parse_uint_list(factor)) table.f.push_back({v});
  }
  const auto betti = sym::spencer_betti(base, table);
  std::vector<std::uint64_t> column;
  for (std::size_t p = 0; p <= max_p; ++p) column.push_back(table.at(p, 0));

  json nil = json::object();
  if (nil_degree > 0)
    for (const auto& [k, v] : sym::nilpotency_report(g, nil_degree)) nil[std::to_string(k)] = to_string(v);

  std::vector<std::size_t> degrees(betti.size());
  for (std::size_t k = 0; k < degrees.size(); ++k) degrees[k] = k;
  const json doc{{"algebra", g.name()}, {"degrees", degrees}, {"betti", betti},
                 {"factor_preset", table.preset}, {"factor", column}, {"base", base}, {"nilpotency", nil}};
  if (gl.json) {
    out << doc.dump(2) << "\n";
  } else {
    out << "algebra " << g.name() << ", factor " << table.preset << " (" << join(column) << "), base (" << join(base) << ")\n";
    out << "betti: " << join(betti) << "\n";
    for (const auto& [k, v] : nil.items()) out << "max |delta^2| on degree " << k << ": " << v.get<std::string>() << "\n";
  }
  write_json_file(gl, "lie_betti.json", doc);
  return kOk;
}

int cmd_lie_delta(const Globals& gl, const std::string& algebra, const std::string& tensor, const std::string& omega,
                  std::size_t times, std::ostream& out) {
  const auto g = lie::resolve_algebra(algebra);
  auto x = sym::parse_sym_tensor(g, tensor);
  const bool curvature = !omega.empty();
  const auto om = curvature ? parse_lie_vector(g, omega) : lie::LieVector(g.dim());
  for (std::size_t i = 0; i < times; ++i)
    x = curvature ? sym::spencer_delta_curvature(g, om, x) : sym::spencer_delta_structural(g, x);
  const auto text = sym::format_sym_tensor(g, x);
  const json doc{{"algebra", g.name()}, {"differential", curvature ? "curvature" : "structural"},
                 {"times", times}, {"input", tensor}, {"result", text}, {"degree", x.degree()}};
  if (gl.json)
    out << doc.dump(2) << "\n";
  else
    out << text << "\n";
  write_json_file(gl, "lie_delta.json", doc);
  return kOk;
}

// ---- cartan ---------------------------------------------------------------

struct CartanConfig {
  std::string algebra;
  std::string preset;
  json params = json::object();
  std::vector<double> lambda0;
  std::vector<double> v;
  std::vector<double> x0;
  double ds = 0.0;
  double s_end = 0.0;
  cartan::Scheme scheme = cartan::Scheme::rk4;
  bool renormalize = false;
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, _] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

CartanConfig parse_cartan_config(const std::string& text) {
  CartanConfig c;
  try {
    const json doc = json::parse(text);
    reject_unknown(doc, {"algebra", "connection", "lambda0", "v", "x0", "ds", "s_end", "scheme", "renormalize", "description"},
                   "cartan config");
    c.algebra = doc.at("algebra").get<std::string>();
    const auto& conn = doc.at("connection");
    reject_unknown(conn, {"preset", "params"}, "connection");
    c.preset = conn.at("preset").get<std::string>();
    if (conn.contains("params")) c.params = conn["params"];
    c.lambda0 = doc.at("lambda0").get<std::vector<double>>();
    c.v = doc.at("v").get<std::vector<double>>();
    c.x0 = doc.value("x0", std::vector<double>(c.v.size(), 0.0));
    c.ds = doc.at("ds").get<double>();
    c.s_end = doc.at("s_end").get<double>();
    c.scheme = cartan::parse_scheme(doc.value("scheme", std::string("rk4")));
    c.renormalize = doc.value("renormalize", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed cartan config: ") + e.what());
  }
  if (!(c.ds > 0.0)) throw ConfigError("ds must be positive");
  if (!(c.s_end >= 0.0)) throw ConfigError("s_end must be non-negative");
  if (c.x0.size() != c.v.size()) throw ConfigError("x0 and v must have the same length");
  return c;
}

cartan::ConnectionSampler make_connection(const lie::LieAlgebra& g, const CartanConfig& c) {
  if (c.preset == "constant") {
    reject_unknown(c.params, {"a"}, "constant connection params");
    std::vector<double> a;
    try {
      a = c.params.at("a").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("constant connection needs params.a: ") + e.what());
    }
    if (a.size() != g.dim()) throw ConfigError("params.a length differs from the algebra dimension");
    return cartan::ConnectionSampler::constant(lie::LieVectorD(a));
  }
  if (c.preset == "abelian_zero") {
    reject_unknown(c.params, {}, "abelian_zero params");
    return cartan::ConnectionSampler::abelian_zero(g.dim());
  }
  if (c.preset == "wu_yang_monopole") {
    reject_unknown(c.params, {"q"}, "monopole params");
    if (c.v.size() != 3) throw ConfigError("the monopole connection lives on (r, theta, phi); v needs 3 entries");
    return cartan::ConnectionSampler::wu_yang_monopole(g.dim(), c.params.value("q", 1.0));
  }
  throw ConfigError("unknown connection preset '" + c.preset + "'");
}

int cmd_cartan(const Globals& gl, const std::string& config_path, bool auto_ds, std::ostream& out) {
  const auto cfg = parse_cartan_config(io::read_text(config_path));
  const auto g = lie::resolve_algebra(cfg.algebra);
  if (cfg.lambda0.size() != g.dim()) throw ConfigError("lambda0 length differs from the algebra dimension");
  const auto conn = make_connection(g, cfg);

  double ds = cfg.ds;
  const double bound0 = cartan::cfl_bound(g, conn.contract(cfg.x0, cfg.v));
  if (auto_ds && ds >= bound0) {
    ds = 0.5 * bound0;
    spdlog::info("ds reduced to {} (half the CFL bound {})", ds, bound0);
  }

  cartan::CharacteristicState start{0.0, cfg.x0, lie::DualVectorD(cfg.lambda0)};
  const auto traj = cartan::integrate(g, start, conn, cfg.v, ds, cfg.s_end, cfg.scheme, cfg.renormalize);

  // Residual estimate per sample: three-point (second-order) derivative of lambda minus the right-hand side.
  const std::size_t n = traj.size();
  std::vector<double> resid(n, 0.0);
  for (std::size_t i = 0; n >= 3 && i < n; ++i) {
    const std::size_t j = std::clamp<std::size_t>(i, 1, n - 2) - 1;
    const double s0 = traj[j].s, s1 = traj[j + 1].s, s2 = traj[j + 2].s, s = traj[i].s;
    // Derivatives of the Lagrange basis polynomials at s.
    const double w0 = ((s - s1) + (s - s2)) / ((s0 - s1) * (s0 - s2));
    const double w1 = ((s - s0) + (s - s2)) / ((s1 - s0) * (s1 - s2));
    const double w2 = ((s - s0) + (s - s1)) / ((s2 - s0) * (s2 - s1));
    const auto rhs = cartan::cartan_rhs(g, conn.contract(traj[i].x, cfg.v), traj[i].lambda);
    double worst = 0.0;
    for (std::size_t a = 0; a < g.dim(); ++a) {
      const double d = w0 * traj[j].lambda[a] + w1 * traj[j + 1].lambda[a] + w2 * traj[j + 2].lambda[a];
      worst = std::max(worst, std::abs(d - rhs[a]));
    }
    resid[i] = worst;
  }

  const double norm0 = cartan::norm(traj.front().lambda);
  const double norm1 = cartan::norm(traj.back().lambda);
  std::optional<double> exact_dev;
  if (conn.constant_value()) {
    double worst = 0.0;
    for (const auto& st : traj) {
      const auto ex = cartan::coadjoint_flow_exact(g, conn.contract(cfg.x0, cfg.v), start.lambda, st.s);
      for (std::size_t a = 0; a < g.dim(); ++a) worst = std::max(worst, std::abs(ex[a] - st.lambda[a]));
    }
    exact_dev = worst;
  }
  double max_resid = 0.0;
  for (double r : resid) max_resid = std::max(max_resid, r);

  if (!gl.out_dir.empty()) {
    std::string csv = "s";
    for (std::size_t a = 0; a < g.dim(); ++a) csv += ",lambda_" + std::to_string(a);
    csv += ",norm,residual_estimate\n";
    for (std::size_t i = 0; i < n; ++i) {
      csv += io::format_number(traj[i].s);
      for (std::size_t a = 0; a < g.dim(); ++a) csv += "," + io::format_number(traj[i].lambda[a]);
      csv += "," + io::format_number(cartan::norm(traj[i].lambda)) + "," + io::format_number(resid[i]) + "\n";
    }
    io::write_text(out_path(gl, "cartan.csv"), csv);
  }

  json doc{{"algebra", g.name()},
           {"connection", conn.name()},
           {"scheme", std::string(cartan::scheme_name(cfg.scheme))},
           {"ds", ds},
           {"cfl_bound", json_number(bound0)},
           {"steps", n - 1},
           {"lambda_final", std::vector<double>(traj.back().lambda.coeffs().begin(), traj.back().lambda.coeffs().end())},
           {"norm_drift", std::abs(norm1 - norm0)},
           {"max_residual_estimate", max_resid}};
  if (exact_dev) doc["max_exact_deviation"] = *exact_dev;
  write_json_file(gl, "cartan_summary.json", doc);
  if (gl.json) {
    out << doc.dump(2) << "\n";
  } else {
    out << "algebra " << g.name() << ", connection " << conn.name() << ", scheme " << cartan::scheme_name(cfg.scheme)
        << ", ds " << io::format_number(ds) << " (CFL bound " << io::format_number(bound0) << "), " << (n - 1)
        << " steps\n";
    out << "final lambda: (";
    for (std::size_t a = 0; a < g.dim(); ++a) out << (a ? ", " : "") << io::format_number(traj.back().lambda[a]);
    out << ")\n";
    out << "norm drift: " << io::format_number(std::abs(norm1 - norm0)) << "\n";
    out << "max residual estimate: " << io::format_number(max_resid) << "\n";
    if (exact_dev) out << "max deviation from exact coadjoint flow: " << io::format_number(*exact_dev) << "\n";
  }
  return kOk;
}

// ---- euler ----------------------------------------------------------------

struct EulerFlags {
  std::optional<std::size_t> n;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::string coupling = "staged";
  std::string strata = "1,3";
  bool no_dump = false;
};

std::string curve_points_csv(const std::vector<euler::MarkerCurve>& curves) {
  std::string s = "label,index,x,y\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.points.size(); ++i)
      s += c.label + "," + std::to_string(i) + "," + io::format_number(c.points[i][0]) + "," +
           io::format_number(c.points[i][1]) + "\n";
  return s;
}

int run_euler(const Globals& gl, io::RunConfig cfg, const EulerFlags& fl, const std::string& preset, std::ostream& out) {
  if (fl.n) cfg.grid.n = *fl.n;
  if (fl.t_end) cfg.t_end = *fl.t_end;
  if (fl.dt) cfg.dt = *fl.dt;
  cfg.grid.validate();
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  run::Options opts;
  if (fl.coupling == "staged")
    opts.coupling = euler::MarkerCoupling::staged;
  else if (fl.coupling == "frozen")
    opts.coupling = euler::MarkerCoupling::frozen;
  else
    throw ConfigError("coupling must be 'staged' or 'frozen'");
  std::vector<double> thresholds;
  if (!fl.strata.empty())
    for (const auto& s : split_list(fl.strata)) thresholds.push_back(std::stod(s));

  const bool dump = !gl.out_dir.empty() && !fl.no_dump;
  const auto res = run::run(cfg, opts);

  if (!gl.out_dir.empty()) {
    io::write_series_csv(out_path(gl, "series.csv"), res.series);
    io::write_text(out_path(gl, "report.txt"), inv::format_report(res.report, res.series.curve_labels));
  }
  if (dump) {
    const double t1 = res.series.records.back().t;
    io::write_field(out_path(gl, "zeta_initial"), cfg.grid, res.initial.values, 0.0, "vorticity");
    io::write_field(out_path(gl, "zeta_final"), cfg.grid, res.final_state.values, t1, "vorticity");
    io::write_strata(out_path(gl, "strata_final"), cfg.grid, inv::strata_classify(res.final_state, thresholds), t1);
    io::write_pgm(out_path(gl, "zeta_initial.pgm"), cfg.grid.n, res.initial.values);
    io::write_pgm(out_path(gl, "zeta_final.pgm"), cfg.grid.n, res.final_state.values);
    io::write_text(out_path(gl, "curves_final.csv"), curve_points_csv(res.final_curves));
  }

  const auto& first = res.series.records.front();
  json circ = json::object();
  for (std::size_t i = 0; i < res.series.curve_labels.size(); ++i)
    circ[res.series.curve_labels[i]] = {{"initial", first.I1[i]}, {"final", res.series.records.back().I1[i]},
                                        {"relative_change", res.report.I1[i]}};
  const json doc{{"preset", preset},
                 {"N", cfg.grid.n},
                 {"t_end", cfg.t_end},
                 {"steps", res.steps},
                 {"I0", {{"initial", first.I0}, {"relative_change", res.report.I0}}},
                 {"I2", {{"initial", first.I2}, {"relative_change", res.report.I2}}},
                 {"circulation", circ},
                 {"max_div", res.max_div}};
  write_json_file(gl, "summary.json", doc);
  if (gl.json) {
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << "grid N=" << cfg.grid.n << ", t_end=" << io::format_number(cfg.t_end) << ", " << res.steps << " steps, "
      << res.series.curve_labels.size() << " material curves\n";
  out << "initial: I0=" << io::format_number(first.I0) << " I2=" << io::format_number(first.I2);
  for (std::size_t i = 0; i < first.I1.size(); ++i)
    out << " circ_" << res.series.curve_labels[i] << "=" << io::format_number(first.I1[i]);
  out << "\n";
  out << inv::format_report(res.report, res.series.curve_labels);
  out << "max divergence residual: " << io::format_number(res.max_div) << "\n";
  if (preset == "gaussian")
    out << "note: reference figures 8.06e-32 (I0), 6.26e-16 (I2), 2.27e-7 (circulation) lie below float64\n"
           "      resolution at this grid size; the acceptance bars are 1e-12, 1e-6 and 1e-4.\n";
  return kOk;
}

// ---- report ---------------------------------------------------------------

int cmd_report(const Globals& gl, const std::string& csv, std::ostream& out) {
  const auto series = io::read_series_csv(csv);
  const auto rep = inv::conservation_report(series.records);
  const auto text = inv::format_report(rep, series.curve_labels);
  json circ = json::object();
  for (std::size_t i = 0; i < rep.I1.size(); ++i) circ[series.curve_labels[i]] = rep.I1[i];
  const json doc{{"I0", rep.I0}, {"I2", rep.I2}, {"I1", circ}, {"records", series.records.size()}};
  if (gl.json)
    out << doc.dump(2) << "\n";
  else
    out << text;
  if (!gl.out_dir.empty()) io::write_text(out_path(gl, "report.txt"), text);
  return kOk;
}

void setup_logging(bool verbose) {
  static const auto logger = [] {
    auto l = spdlog::stderr_logger_mt("spencer");
    spdlog::set_default_logger(l);
    return l;
  }();
  logger->set_level(verbose ? spdlog::level::debug : spdlog::level::warn);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie-algebra, Spencer-complex, Cartan-characteristic and 2D Euler toolkit", "spencer"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  app.add_option("--out", gl.out_dir, "Directory for machine-readable outputs");
  app.add_flag("--json", gl.json, "Print JSON instead of tables");
  app.add_flag("-v,--verbose", gl.verbose, "Verbose logging");

  // lie
  auto* lie_cmd = app.add_subcommand("lie", "Exact Lie-algebra and Spencer-complex computations");
  lie_cmd->require_subcommand(1);
  std::string algebra = "su2";
  auto* verify = lie_cmd->add_subcommand("verify", "Bracket table, Jacobi residual, Killing form");
  verify->add_option("--algebra", algebra, "Preset name or JSON path");
  auto* coh = lie_cmd->add_subcommand("cohomology", "Chevalley-Eilenberg cohomology dimensions");
  std::size_t p = 0;
  std::optional<std::size_t> max_q;
  coh->add_option("--algebra", algebra, "Preset name or JSON path");
  coh->add_option("--p", p, "Symmetric degree of the module");
  coh->add_option("--max-q", max_q, "Largest cochain degree (default: dim)");
  auto* betti = lie_cmd->add_subcommand("betti", "Spencer Betti numbers from base Betti numbers");
  std::string base = "1,2,1";
  std::string factor = "sym";
  std::size_t nil_degree = 2;
  betti->add_option("--algebra", algebra, "Preset name or JSON path");
  betti->add_option("--base", base, "Base Betti numbers, comma separated");
  betti->add_option("--factor", factor, "sym, whitehead, or explicit comma-separated factors");
  betti->add_option("--nilpotency", nil_degree, "Report max |delta^2| up to this degree (0: skip)");
  auto* delta = lie_cmd->add_subcommand("delta", "Apply a Spencer differential to a symmetric tensor");
  std::string tensor;
  std::string omega;
  std::size_t times = 1;
  delta->add_option("--algebra", algebra, "Preset name or JSON path");
  delta->add_option("--tensor", tensor, "Tensor such as '2*e1*e2 - 1/2*e3'")->required();
  delta->add_option("--omega", omega, "Curvature direction (comma-separated); selects the curvature differential");
  delta->add_option("--times", times, "Number of applications");

  // cartan
  auto* cartan_cmd = app.add_subcommand("cartan", "Integrate a characteristic of the modified Cartan equation");
  std::string cartan_config;
  bool auto_ds = false;
  cartan_cmd->add_option("config", cartan_config, "Run config JSON")->required();
  cartan_cmd->add_flag("--auto-ds", auto_ds, "Halve ds to the CFL bound if needed");

  // euler
  auto* euler_cmd = app.add_subcommand("euler", "Pseudo-spectral 2D Euler runs with invariant tracking");
  euler_cmd->require_subcommand(1);
  EulerFlags fl;
  std::string run_config;
  auto add_euler_flags = [&](CLI::App* c) {
    c->add_option("--N", fl.n, "Grid points per axis");
    c->add_option("--t-end", fl.t_end, "Final time");
    c->add_option("--dt", fl.dt, "Fixed time step (default: automatic)");
    c->add_option("--coupling", fl.coupling, "Marker coupling: staged or frozen");
    c->add_option("--strata", fl.strata, "Vorticity thresholds for the strata dump");
    c->add_flag("--no-dump", fl.no_dump, "Skip field dumps");
  };
  auto* euler_run = euler_cmd->add_subcommand("run", "Run from a config file");
  euler_run->add_option("config", run_config, "Run config JSON")->required();
  add_euler_flags(euler_run);
  auto* euler_gauss = euler_cmd->add_subcommand("gaussian", "Single Gaussian vortex preset");
  add_euler_flags(euler_gauss);
  auto* euler_multi = euler_cmd->add_subcommand("multivortex", "Three-vortex preset");
  add_euler_flags(euler_multi);

  // report
  auto* report_cmd = app.add_subcommand("report", "Recompute the conservation report from a series CSV");
  std::string csv;
  report_cmd->add_option("csv", csv, "Series CSV")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kConfig;
  }

  setup_logging(gl.verbose);
  try {
    if (*lie_cmd) {
      if (*verify) return cmd_lie_verify(gl, algebra, out);
      if (*coh) return cmd_lie_cohomology(gl, algebra, p, max_q, out);
      if (*betti) return cmd_lie_betti(gl, algebra, base, factor, nil_degree, out);
      if (*delta) return cmd_lie_delta(gl, algebra, tensor, omega, times, out);
    }
    if (*cartan_cmd) return cmd_cartan(gl, cartan_config, auto_ds, out);
    if (*euler_cmd) {
      if (*euler_run) return run_euler(gl, io::load_run_config(run_config), fl, "run", out);
      if (*euler_gauss) return run_euler(gl, io::load_preset("gaussian"), fl, "gaussian", out);
      if (*euler_multi) return run_euler(gl, io::load_preset("appendix_d"), fl, "appendix_d", out);
    }
    if (*report_cmd) return cmd_report(gl, csv, out);
  } catch (const CflViolation& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}

}  // namespace spencer::cli
