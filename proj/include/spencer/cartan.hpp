#pragma once

// Characteristic-line integration of the covariant-constancy equation
// d lambda + ad*_omega lambda = 0 for a g*-valued function lambda.
//
// Along the base path x(s) = x0 + s v the equation reduces to the linear ODE
//
//     d lambda_a / ds = -C^c_{ba} (A_mu v^mu)^b lambda_c
//
// with C^c_{ab} as in liealg.hpp. In that convention the right-hand side is
// coad_apply(g, A.v, lambda).

#include "spencer/liealg.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spencer::cartan {

using lie::DualVectorD;
using lie::LieAlgebra;
using lie::LieVectorD;

/// Local connection potential: (base point x, direction mu) -> A_mu(x) in g.
class ConnectionSampler {
 public:
  using Fn = std::function<LieVectorD(std::span<const double> x, std::size_t mu)>;

  ConnectionSampler(std::size_t algebra_dim, std::string name, Fn fn,
                    std::optional<LieVectorD> constant_value = std::nullopt);

  /// A_mu(x) = a for every direction mu and every x.
  static ConnectionSampler constant(LieVectorD a);
  static ConnectionSampler abelian_zero(std::size_t algebra_dim);
  /// Northern-patch monopole A = q (1 - cos theta) d phi along the last basis
  /// vector, with x = (r, theta, phi).
  static ConnectionSampler wu_yang_monopole(std::size_t algebra_dim, double q);

  LieVectorD operator()(std::span<const double> x, std::size_t mu) const;
  /// sum_mu A_mu(x) v^mu
  LieVectorD contract(std::span<const double> x, std::span<const double> v) const;

  const std::string& name() const noexcept { return name_; }
  std::size_t algebra_dim() const noexcept { return dim_; }
  /// Set for presets whose value does not depend on x or mu.
  const std::optional<LieVectorD>& constant_value() const noexcept { return constant_; }

 private:
  std::size_t dim_;
  std::string name_;
  Fn fn_;
  std::optional<LieVectorD> constant_;
};

struct CharacteristicState {
  double s = 0.0;
  std::vector<double> x;
  DualVectorD lambda;
};

enum class Scheme { euler_paper, rk4 };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s);

DualVectorD cartan_rhs(const LieAlgebra& g, const LieVectorD& a_dot_v, const DualVectorD& lambda);

/// 1 / max_{a,b,c} |C^c_{ba} (A.v)^b|; +infinity when every term vanishes.
double cfl_bound(const LieAlgebra& g, const LieVectorD& a_dot_v);

/// Advances one step of size ds. Throws CflViolation (state untouched) when
/// ds >= cfl_bound at the current point and NumericalError on non-finite output.
/// With `renormalize`, lambda is rescaled to its pre-step norm.
CharacteristicState step(const LieAlgebra& g, const CharacteristicState& state, const ConnectionSampler& a,
                         std::span<const double> v, double ds, Scheme scheme, bool renormalize);

/// Repeated `step` from state.s to s_end; the final step is shortened to land on s_end.
std::vector<CharacteristicState> integrate(const LieAlgebra& g, const CharacteristicState& start,
                                           const ConnectionSampler& a, std::span<const double> v, double ds,
                                           double s_end, Scheme scheme, bool renormalize);

/// Generator M of the constant-coefficient ODE, d lambda/ds = M lambda.
Matrix<double> cartan_generator(const LieAlgebra& g, const LieVectorD& a_dot_v);

/// exp(s M) lambda0 by scaling and squaring of the Taylor series (truncation 1e-14).
DualVectorD coadjoint_flow_exact(const LieAlgebra& g, const LieVectorD& a_dot_v, const DualVectorD& lambda0, double s);

Matrix<double> matrix_exponential(const Matrix<double>& m);

/// Samples of lambda on a regular grid over the base, last axis fastest.
struct SampleGrid {
  std::vector<double> origin;
  std::vector<std::size_t> shape;
  double h = 0.0;
  std::vector<DualVectorD> values;

  std::size_t axes() const noexcept { return shape.size(); }
};

/// Max over interior nodes and axes mu of || (d_mu lambda) - cartan_rhs(A_mu, lambda) ||_inf,
/// with d_mu the central difference. Vanishes on exact solutions of the characteristic ODE
/// up to O(h^2).
double cartan_residual(const LieAlgebra& g, const ConnectionSampler& a, const SampleGrid& grid);

struct MonopoleCheck {
  double numeric = 0.0;
  double closed_form = 0.0;
  double difference = 0.0;
};

/// Central difference of lambda_r(r) = q / r^2 against -2 q / r^3.
MonopoleCheck monopole_radial_check(double q, double r, double h);

/// <lambda, Omega> / |lambda|^2
double nonholonomy_coefficient(const LieAlgebra& g, const DualVectorD& lambda, const LieVectorD& omega);

double norm(const DualVectorD& v);

}  // namespace spencer::cartan
