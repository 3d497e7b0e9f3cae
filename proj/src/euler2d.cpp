#include "spencer/euler2d.hpp"

#include "spencer/parallel.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

namespace spencer::euler {

namespace {

constexpr Complex kI{0.0, 1.0};

void note_mean_mode(const GridSpec& g, std::span<const Complex> zeta_hat) {
  const double mean = zeta_hat[0].real() / static_cast<double>(g.points());
  if (std::abs(mean) <= 1e-12) return;
  static std::atomic<bool> reported{false};
  if (!reported.exchange(true))
    spdlog::info("vorticity has nonzero mean {:.6g}; the mean mode does not induce velocity on the torus", mean);
  else
    spdlog::debug("vorticity mean {:.6g} excluded from velocity inversion", mean);
}

}  // namespace

double VelocityField::max_speed() const {
  double m = 0.0;
  for (std::size_t i = 0; i < ux.size(); ++i) m = std::max(m, std::hypot(ux[i], uy[i]));
  return m;
}

double wrap(double x, double length) {
  double r = std::fmod(x, length);
  if (r < 0.0) r += length;
  if (r >= length) r -= length;
  return r;
}

double minimal_image(double d, double length) { return d - length * std::round(d / length); }

MarkerCurve MarkerCurve::circle(std::string label, Point center, double radius, std::size_t m, double length) {
  if (m < 8) throw ConfigError("marker curves need at least 8 points");
  if (!(radius > 0.0)) throw ConfigError("marker circle radius must be positive");
  MarkerCurve c{std::move(label), {}};
  c.points.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    c.points.push_back({wrap(center[0] + radius * std::cos(th), length), wrap(center[1] + radius * std::sin(th), length)});
  }
  return c;
}

MarkerCurve MarkerCurve::reversed() const {
  MarkerCurve c{label, points};
  std::reverse(c.points.begin(), c.points.end());
  return c;
}

std::vector<double> dealias_mask(const GridSpec& g) {
  const long cutoff = static_cast<long>(g.n / 3);
  const std::size_t nc = g.spectral_cols();
  std::vector<double> mask(g.spectral_size(), 0.0);
  for (std::size_t jy = 0; jy < g.n; ++jy)
    for (std::size_t ix = 0; ix < nc; ++ix)
      if (std::abs(g.mode_y(jy)) <= cutoff && static_cast<long>(ix) <= cutoff) mask[jy * nc + ix] = 1.0;
  return mask;
}

void velocity_spectra(const GridSpec& g, std::span<const Complex> zeta_hat, std::vector<Complex>& ux_hat,
                      std::vector<Complex>& uy_hat) {
  const std::size_t nc = g.spectral_cols();
  if (zeta_hat.size() != g.spectral_size()) throw DimensionMismatch("vorticity spectrum size mismatch");
  ux_hat.assign(g.spectral_size(), Complex{});
  uy_hat.assign(g.spectral_size(), Complex{});
  for (std::size_t jy = 0; jy < g.n; ++jy) {
    if (jy == g.n / 2) continue;  // first derivatives drop Nyquist modes
    const double ky = g.ky(jy);
    for (std::size_t ix = 0; ix < nc; ++ix) {
      if (ix == g.n / 2) continue;
      const double kx = g.kx(ix);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const Complex psi = zeta_hat[jy * nc + ix] / k2;
      ux_hat[jy * nc + ix] = kI * ky * psi;
      uy_hat[jy * nc + ix] = -kI * kx * psi;
    }
  }
}

std::vector<Complex> rhs_spectral(const GridSpec& g, std::span<const Complex> zeta_hat, bool dealias) {
  const std::size_t nc = g.spectral_cols();
  std::vector<Complex> z(zeta_hat.begin(), zeta_hat.end());
  std::vector<double> mask;
  if (dealias) {
    mask = dealias_mask(g);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] *= mask[i];
  }
  std::vector<Complex> ux_hat, uy_hat;
  velocity_spectra(g, z, ux_hat, uy_hat);
  std::vector<Complex> dzx(z.size()), dzy(z.size());
  for (std::size_t jy = 0; jy < g.n; ++jy)
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const std::size_t k = jy * nc + ix;
      dzx[k] = ix == g.n / 2 ? Complex{} : kI * g.kx(ix) * z[k];
      dzy[k] = jy == g.n / 2 ? Complex{} : kI * g.ky(jy) * z[k];
    }
  const auto& tr = spectral::Transform::get(g.n);
  const auto ux = tr.inverse(ux_hat);
  const auto uy = tr.inverse(uy_hat);
  const auto zx = tr.inverse(dzx);
  const auto zy = tr.inverse(dzy);
  std::vector<double> adv(g.points());
  for (std::size_t i = 0; i < adv.size(); ++i) adv[i] = -(ux[i] * zx[i] + uy[i] * zy[i]);
  auto out = tr.forward(adv);
  if (dealias)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return out;
}

VelocityField velocity_from_spectrum(const GridSpec& g, std::span<const Complex> zeta_hat) {
  note_mean_mode(g, zeta_hat);
  std::vector<Complex> ux_hat, uy_hat;
  velocity_spectra(g, zeta_hat, ux_hat, uy_hat);
  const auto& tr = spectral::Transform::get(g.n);
  return {g, tr.inverse(ux_hat), tr.inverse(uy_hat)};
}

VelocityField velocity_from_vorticity(const VorticityField& zeta) {
  zeta.grid.validate();
  return velocity_from_spectrum(zeta.grid, zeta.spectral());
}

VorticityField rhs_vorticity(const VorticityField& zeta, bool dealias) {
  zeta.grid.validate();
  return {zeta.grid, spectral::inverse(zeta.grid, rhs_spectral(zeta.grid, zeta.spectral(), dealias))};
}

double advective_dt_limit(const VelocityField& u) {
  const double umax = u.max_speed();
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * u.grid.spacing() / umax;
}

namespace {

void check_cfl(double dt, double limit) {
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the advective limit 0.5*(L/N)/max|u| = " << limit;
    throw CflViolation(msg.str(), limit);
  }
}

}  // namespace

VorticityField rk4_step(const VorticityField& zeta, double dt, bool dealias) {
  zeta.grid.validate();
  if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("time step must be finite and non-negative");
  check_cfl(dt, advective_dt_limit(velocity_from_vorticity(zeta)));
  if (dt == 0.0) return zeta;
  const auto& z0 = zeta.values;
  auto stage = [&](const std::vector<double>& base, const std::vector<double>* k, double w) {
    VorticityField f{zeta.grid, base};
    if (k)
      for (std::size_t i = 0; i < base.size(); ++i) f.values[i] += w * (*k)[i];
    return rhs_vorticity(f, dealias).values;
  };
  const auto k1 = stage(z0, nullptr, 0.0);
  const auto k2 = stage(z0, &k1, 0.5 * dt);
  const auto k3 = stage(z0, &k2, 0.5 * dt);
  const auto k4 = stage(z0, &k3, dt);
  VorticityField out{zeta.grid, z0};
  for (std::size_t i = 0; i < z0.size(); ++i) out.values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  for (double v : out.values)
    if (!std::isfinite(v)) throw NumericalError("non-finite vorticity after RK4 step");
  return out;
}

VorticityField gaussian_vorticity(const GridSpec& g, const std::vector<Point>& centers,
                                  const std::vector<double>& alphas, const std::vector<double>& sigmas) {
  if (centers.size() != alphas.size() || centers.size() != sigmas.size())
    throw ConfigError("gaussian_vorticity: centers, alphas and sigmas differ in length");
  std::vector<GaussianVortex> vs;
  for (std::size_t i = 0; i < centers.size(); ++i) vs.push_back({centers[i][0], centers[i][1], alphas[i], sigmas[i]});
  return gaussian_vorticity(g, vs);
}

VorticityField gaussian_vorticity(const GridSpec& g, const std::vector<GaussianVortex>& vortices) {
  g.validate();
  auto f = VorticityField::zeros(g);
  const double h = g.spacing();
  for (const auto& v : vortices) {
    if (!(v.sigma > 0.0)) throw ConfigError("vortex width sigma must be positive");
    const double inv = 1.0 / (2.0 * v.sigma * v.sigma);
    for (std::size_t jy = 0; jy < g.n; ++jy) {
      const double dy = static_cast<double>(jy) * h - v.y;
      for (std::size_t ix = 0; ix < g.n; ++ix) {
        const double dx = static_cast<double>(ix) * h - v.x;
        f.at(ix, jy) += v.alpha * std::exp(-(dx * dx + dy * dy) * inv);
      }
    }
  }
  return f;
}

RefinedVelocity::RefinedVelocity(const VelocityField& u, std::size_t factor)
    : RefinedVelocity(u.grid, spectral::forward(u.grid, u.ux), spectral::forward(u.grid, u.uy), factor) {}

RefinedVelocity::RefinedVelocity(const GridSpec& g, std::span<const Complex> ux_hat, std::span<const Complex> uy_hat,
                                 std::size_t factor)
    : m_(g.n * factor), length_(g.length) {
  if (factor == 0) throw ConfigError("refinement factor must be positive");
  const auto& tr = spectral::Transform::get(m_);
  ux_ = tr.inverse(spectral::zero_pad(ux_hat, g.n, m_));
  uy_ = tr.inverse(spectral::zero_pad(uy_hat, g.n, m_));
}

Point RefinedVelocity::operator()(Point p) const {
  const double h = length_ / static_cast<double>(m_);
  const double fx = wrap(p[0], length_) / h;
  const double fy = wrap(p[1], length_) / h;
  auto i0 = static_cast<std::size_t>(fx);
  auto j0 = static_cast<std::size_t>(fy);
  const double tx = fx - static_cast<double>(i0);
  const double ty = fy - static_cast<double>(j0);
  i0 %= m_;
  j0 %= m_;
  const std::size_t i1 = (i0 + 1) % m_;
  const std::size_t j1 = (j0 + 1) % m_;
  auto bilinear = [&](const std::vector<double>& f) {
    const double f00 = f[j0 * m_ + i0], f10 = f[j0 * m_ + i1];
    const double f01 = f[j1 * m_ + i0], f11 = f[j1 * m_ + i1];
    return (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) + ty * ((1.0 - tx) * f01 + tx * f11);
  };
  return {bilinear(ux_), bilinear(uy_)};
}

void RefinedVelocity::sample(std::span<const Point> points, std::span<Point> out) const {
  if (points.size() != out.size()) throw DimensionMismatch("sample: output span size mismatch");
  parallel_for(points.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = (*this)(points[i]);
  });
}

Point interpolate_velocity(const VelocityField& u, Point p) {
  if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw ConfigError("interpolation point must be finite");
  return RefinedVelocity(u)(p);
}

std::vector<MarkerCurve> advect_markers(const std::vector<MarkerCurve>& curves, const VelocityField& u, double dt) {
  return advect_markers(curves, RefinedVelocity(u), dt);
}

std::vector<MarkerCurve> advect_markers(const std::vector<MarkerCurve>& curves, const RefinedVelocity& u, double dt) {
  const double len = u.length();
  std::vector<MarkerCurve> out = curves;
  for (auto& c : out) {
    const auto& src = c.points;
    parallel_for(src.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const Point p = src[i];
        const Point k1 = u(p);
        const Point k2 = u({p[0] + 0.5 * dt * k1[0], p[1] + 0.5 * dt * k1[1]});
        const Point k3 = u({p[0] + 0.5 * dt * k2[0], p[1] + 0.5 * dt * k2[1]});
        const Point k4 = u({p[0] + dt * k3[0], p[1] + dt * k3[1]});
        c.points[i] = {wrap(p[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]), len),
                       wrap(p[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]), len)};
      }
    });
  }
  return out;
}

Simulation::Simulation(VorticityField zeta0, std::vector<MarkerCurve> curves, bool dealias, MarkerCoupling coupling)
    : grid_(zeta0.grid), curves_(std::move(curves)), dealias_(dealias), coupling_(coupling) {
  grid_.validate();
  zeta_hat_ = zeta0.spectral();
  for (const auto& c : curves_)
    if (c.points.size() < 8) throw ConfigError("marker curve '" + c.label + "' has fewer than 8 points");
}

VorticityField Simulation::vorticity() const { return {grid_, spectral::inverse(grid_, zeta_hat_)}; }

VelocityField Simulation::velocity() const { return velocity_from_spectrum(grid_, zeta_hat_); }

double Simulation::stable_dt() const { return advective_dt_limit(velocity()); }

void Simulation::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive and finite");
  check_cfl(dt, stable_dt());

  const std::size_t ns = zeta_hat_.size();
  auto shifted = [&](const std::vector<Complex>& k, double w) {
    std::vector<Complex> z = zeta_hat_;
    for (std::size_t i = 0; i < ns; ++i) z[i] += w * k[i];
    return z;
  };

  // Flattened marker positions and their stage velocities.
  std::vector<Point> x0;
  for (const auto& c : curves_) x0.insert(x0.end(), c.points.begin(), c.points.end());
  const bool staged = coupling_ == MarkerCoupling::staged && !x0.empty();

  auto marker_velocity = [&](const std::vector<Complex>& z, const std::vector<Point>& x) {
    std::vector<Complex> ux_hat, uy_hat;
    velocity_spectra(grid_, z, ux_hat, uy_hat);
    RefinedVelocity u(grid_, ux_hat, uy_hat);
    std::vector<Point> v(x.size());
    u.sample(x, v);
    return v;
  };
  auto moved = [&](const std::vector<Point>& v, double w) {
    std::vector<Point> x = x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = {x[i][0] + w * v[i][0], x[i][1] + w * v[i][1]};
    return x;
  };

  std::vector<MarkerCurve> frozen_result;
  if (coupling_ == MarkerCoupling::frozen && !x0.empty()) {
    std::vector<Complex> ux_hat, uy_hat;
    velocity_spectra(grid_, zeta_hat_, ux_hat, uy_hat);
    frozen_result = advect_markers(curves_, RefinedVelocity(grid_, ux_hat, uy_hat), dt);
  }

  const auto k1 = rhs_spectral(grid_, zeta_hat_, dealias_);
  std::vector<Point> v1, v2, v3, v4;
  if (staged) v1 = marker_velocity(zeta_hat_, x0);
  const auto z2 = shifted(k1, 0.5 * dt);
  const auto k2 = rhs_spectral(grid_, z2, dealias_);
  if (staged) v2 = marker_velocity(z2, moved(v1, 0.5 * dt));
  const auto z3 = shifted(k2, 0.5 * dt);
  const auto k3 = rhs_spectral(grid_, z3, dealias_);
  if (staged) v3 = marker_velocity(z3, moved(v2, 0.5 * dt));
  const auto z4 = shifted(k3, dt);
  const auto k4 = rhs_spectral(grid_, z4, dealias_);
  if (staged) v4 = marker_velocity(z4, moved(v3, dt));

  for (std::size_t i = 0; i < ns; ++i) zeta_hat_[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

  if (staged) {
    std::size_t flat = 0;
    for (auto& c : curves_)
      for (auto& p : c.points) {
        for (int d = 0; d < 2; ++d)
          p[d] = wrap(p[d] + dt / 6.0 * (v1[flat][d] + 2.0 * v2[flat][d] + 2.0 * v3[flat][d] + v4[flat][d]),
                      grid_.length);
        ++flat;
      }
  } else if (!frozen_result.empty()) {
    curves_ = std::move(frozen_result);
  }
  t_ += dt;
}

}  // namespace spencer::euler
