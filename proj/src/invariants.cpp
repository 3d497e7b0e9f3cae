#include "spencer/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spencer::inv {

double total_vorticity(const VorticityField& zeta) {
  const double h = zeta.grid.spacing();
  double s = 0.0;
  for (double v : zeta.values) s += v;
  return s * h * h;
}

double enstrophy(const VorticityField& zeta) {
  const double h = zeta.grid.spacing();
  double s = 0.0;
  for (double v : zeta.values) s += v * v;
  return s * h * h;
}

double circulation(const MarkerCurve& curve, const RefinedVelocity& u) {
  const auto& pts = curve.points;
  const std::size_t m = pts.size();
  if (m < 8) throw ConfigError("circulation needs a curve with at least 8 points");
  std::vector<euler::Point> vel(m);
  u.sample(pts, vel);
  const double len = u.length();
  double gamma = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& next = pts[(i + 1) % m];
    const auto& prev = pts[(i + m - 1) % m];
    const double dx = euler::minimal_image(next[0] - prev[0], len);
    const double dy = euler::minimal_image(next[1] - prev[1], len);
    gamma += 0.5 * (vel[i][0] * dx + vel[i][1] * dy);
  }
  return gamma;
}

double circulation(const MarkerCurve& curve, const VelocityField& u) { return circulation(curve, RefinedVelocity(u)); }

double divergence_residual(const VelocityField& u) {
  const auto& g = u.grid;
  const auto ux = spectral::forward(g, u.ux);
  const auto uy = spectral::forward(g, u.uy);
  const std::size_t nc = g.spectral_cols();
  double worst_div = 0.0;
  double worst_mag = 0.0;
  for (std::size_t jy = 0; jy < g.n; ++jy)
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const std::size_t k = jy * nc + ix;
      worst_div = std::max(worst_div, std::abs(g.kx(ix) * ux[k] + g.ky(jy) * uy[k]));
      worst_mag = std::max(worst_mag, std::sqrt(std::norm(ux[k]) + std::norm(uy[k])));
    }
  return worst_mag == 0.0 ? 0.0 : worst_div / worst_mag;
}

InvariantRecord phi_triple(const VorticityField& zeta, const std::vector<MarkerCurve>& curves, double t) {
  InvariantRecord r;
  r.t = t;
  r.I0 = total_vorticity(zeta);
  r.I2 = enstrophy(zeta);
  const auto u = euler::velocity_from_vorticity(zeta);
  r.div_max = divergence_residual(u);
  if (!curves.empty()) {
    const RefinedVelocity fine(u);
    for (const auto& c : curves) r.I1.push_back(circulation(c, fine));
  }
  return r;
}

StrataGrid strata_classify(const VorticityField& zeta, const std::vector<double>& thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < 0.0) throw ConfigError("strata thresholds must be non-negative");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) throw ConfigError("strata thresholds must be strictly ascending");
  }
  StrataGrid out{zeta.grid.n, std::vector<std::int32_t>(zeta.values.size(), 0)};
  for (std::size_t i = 0; i < zeta.values.size(); ++i) {
    const double mag = std::abs(zeta.values[i]);
    out.labels[i] = static_cast<std::int32_t>(std::upper_bound(thresholds.begin(), thresholds.end(), mag) - thresholds.begin());
  }
  return out;
}

ConservationReport conservation_report(const std::vector<InvariantRecord>& series) {
  if (series.size() < 2) throw ConfigError("conservation report needs at least two records");
  const auto& first = series.front();
  const auto& last = series.back();
  if (first.I1.size() != last.I1.size()) throw DimensionMismatch("records disagree on the number of curves");
  auto rel = [](double a, double b) { return std::abs(b - a) / std::max(std::abs(a), kRelativeFloor); };
  ConservationReport r;
  r.I0 = rel(first.I0, last.I0);
  r.I2 = rel(first.I2, last.I2);
  for (std::size_t i = 0; i < first.I1.size(); ++i) r.I1.push_back(rel(first.I1[i], last.I1[i]));
  return r;
}

std::string format_report(const ConservationReport& report, const std::vector<std::string>& curve_labels) {
  std::ostringstream os;
  char buf[64];
  auto line = [&](const std::string& name, double v) {
    std::snprintf(buf, sizeof buf, "%.6e", v);
    os << "  " << name;
    for (std::size_t i = name.size(); i < 24; ++i) os << ' ';
    os << buf << '\n';
  };
  os << "relative change |last - first| / max(|first|, 1e-30)\n";
  line("I0 (total vorticity)", report.I0);
  line("I2 (enstrophy)", report.I2);
  for (std::size_t i = 0; i < report.I1.size(); ++i)
    line("I1 circ_" + (i < curve_labels.size() ? curve_labels[i] : std::to_string(i)), report.I1[i]);
  return os.str();
}

}  // namespace spencer::inv
