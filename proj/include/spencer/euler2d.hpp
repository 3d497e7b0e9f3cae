#pragma once

// Pseudo-spectral 2D incompressible Euler on the periodic square [0, L)^2.
//
// Conventions: zeta = d_x u_y - d_y u_x, u = (d_y psi, -d_x psi), zeta = -Laplacian(psi).
// In Fourier space psi_k = zeta_k / |k|^2 (k != 0), u_x = i k_y psi_k, u_y = -i k_x psi_k,
// and the mean mode never contributes to the velocity.

#include "spencer/spectral.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spencer::euler {

using spectral::Complex;
using spectral::GridSpec;

using Point = std::array<double, 2>;

struct VorticityField {
  GridSpec grid;
  std::vector<double> values;

  static VorticityField zeros(const GridSpec& g) { return {g, std::vector<double>(g.points(), 0.0)}; }
  double& at(std::size_t ix, std::size_t jy) { return values[jy * grid.n + ix]; }
  double at(std::size_t ix, std::size_t jy) const { return values[jy * grid.n + ix]; }
  std::vector<Complex> spectral() const { return spectral::forward(grid, values); }
};

struct VelocityField {
  GridSpec grid;
  std::vector<double> ux;
  std::vector<double> uy;

  static VelocityField zeros(const GridSpec& g) {
    return {g, std::vector<double>(g.points(), 0.0), std::vector<double>(g.points(), 0.0)};
  }
  double max_speed() const;
};

struct MarkerCurve {
  std::string label;
  std::vector<Point> points;

  /// M >= 8 points on a circle, counter-clockwise, wrapped into [0, L)^2.
  static MarkerCurve circle(std::string label, Point center, double radius, std::size_t m, double length);
  MarkerCurve reversed() const;
};

/// Wraps a coordinate into [0, length).
double wrap(double x, double length);
/// Closest periodic image of b - a.
double minimal_image(double d, double length);

// ---- spectral kernels ------------------------------------------------------

/// Keeps modes with |mode| <= N/3 in both directions.
std::vector<double> dealias_mask(const GridSpec& g);

void velocity_spectra(const GridSpec& g, std::span<const Complex> zeta_hat, std::vector<Complex>& ux_hat,
                      std::vector<Complex>& uy_hat);

/// Spectral -(u . grad) zeta. With `dealias`, inputs and output are truncated by the 2/3 rule.
std::vector<Complex> rhs_spectral(const GridSpec& g, std::span<const Complex> zeta_hat, bool dealias);

// ---- field operations ------------------------------------------------------

VelocityField velocity_from_vorticity(const VorticityField& zeta);
VelocityField velocity_from_spectrum(const GridSpec& g, std::span<const Complex> zeta_hat);

VorticityField rhs_vorticity(const VorticityField& zeta, bool dealias = true);

/// 0.5 * (L / N) / max|u|, or +infinity for a motionless field.
double advective_dt_limit(const VelocityField& u);

/// Classical RK4 on rhs_vorticity. Throws CflViolation if dt exceeds advective_dt_limit.
VorticityField rk4_step(const VorticityField& zeta, double dt, bool dealias = true);

struct GaussianVortex {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;
  double sigma = 1.0;
};

/// sum_i alpha_i exp(-((x - x_i)^2 + (y - y_i)^2) / (2 sigma_i^2)), evaluated pointwise.
VorticityField gaussian_vorticity(const GridSpec& g, const std::vector<Point>& centers,
                                  const std::vector<double>& alphas, const std::vector<double>& sigmas);
VorticityField gaussian_vorticity(const GridSpec& g, const std::vector<GaussianVortex>& vortices);

// ---- marker tracking -------------------------------------------------------

/// Velocity refined spectrally onto a (factor * N)^2 grid and sampled bilinearly.
class RefinedVelocity {
 public:
  static constexpr std::size_t kDefaultFactor = 4;

  explicit RefinedVelocity(const VelocityField& u, std::size_t factor = kDefaultFactor);
  RefinedVelocity(const GridSpec& g, std::span<const Complex> ux_hat, std::span<const Complex> uy_hat,
                  std::size_t factor = kDefaultFactor);

  Point operator()(Point p) const;
  void sample(std::span<const Point> points, std::span<Point> out) const;

  std::size_t fine_n() const noexcept { return m_; }
  double length() const noexcept { return length_; }

 private:
  std::size_t m_ = 0;
  double length_ = 0.0;
  std::vector<double> ux_;
  std::vector<double> uy_;
};

Point interpolate_velocity(const VelocityField& u, Point p);

/// RK4 on every marker with the velocity held fixed over the step.
std::vector<MarkerCurve> advect_markers(const std::vector<MarkerCurve>& curves, const VelocityField& u, double dt);
std::vector<MarkerCurve> advect_markers(const std::vector<MarkerCurve>& curves, const RefinedVelocity& u, double dt);

// ---- time integration ------------------------------------------------------

enum class MarkerCoupling {
  /// Markers use the velocity of each RK4 stage, so they move with the evolving flow.
  staged,
  /// Markers use the velocity at the start of the step (advect_markers).
  frozen,
};

/// Vorticity plus material curves advanced together.
class Simulation {
 public:
  Simulation(VorticityField zeta0, std::vector<MarkerCurve> curves, bool dealias = true,
             MarkerCoupling coupling = MarkerCoupling::staged);

  double time() const noexcept { return t_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<MarkerCurve>& curves() const noexcept { return curves_; }
  const std::vector<Complex>& spectrum() const noexcept { return zeta_hat_; }

  VorticityField vorticity() const;
  VelocityField velocity() const;

  /// advective_dt_limit of the current state.
  double stable_dt() const;

  /// Advances by dt; throws CflViolation without changing state if dt > stable_dt().
  void step(double dt);

 private:
  GridSpec grid_;
  std::vector<Complex> zeta_hat_;
  std::vector<MarkerCurve> curves_;
  bool dealias_;
  MarkerCoupling coupling_;
  double t_ = 0.0;
};

}  // namespace spencer::euler
