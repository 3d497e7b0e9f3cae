#include "spencer/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spencer::cartan {

ConnectionSampler::ConnectionSampler(std::size_t algebra_dim, std::string name, Fn fn,
                                     std::optional<LieVectorD> constant_value)
    : dim_(algebra_dim), name_(std::move(name)), fn_(std::move(fn)), constant_(std::move(constant_value)) {}

ConnectionSampler ConnectionSampler::constant(LieVectorD a) {
  const std::size_t n = a.size();
  auto value = a;
  return ConnectionSampler(
      n, "constant", [a = std::move(a)](std::span<const double>, std::size_t) { return a; }, std::move(value));
}

ConnectionSampler ConnectionSampler::abelian_zero(std::size_t algebra_dim) {
  LieVectorD zero(algebra_dim);
  return ConnectionSampler(
      algebra_dim, "abelian_zero", [zero](std::span<const double>, std::size_t) { return zero; }, zero);
}

ConnectionSampler ConnectionSampler::wu_yang_monopole(std::size_t algebra_dim, double q) {
  if (algebra_dim == 0) throw DimensionMismatch("monopole connection needs a non-trivial algebra");
  return ConnectionSampler(algebra_dim, "wu_yang_monopole",
                           [algebra_dim, q](std::span<const double> x, std::size_t mu) {
                             if (x.size() < 3) throw DimensionMismatch("monopole connection expects x = (r, theta, phi)");
                             LieVectorD a(algebra_dim);
                             if (mu == 2) a[algebra_dim - 1] = q * (1.0 - std::cos(x[1]));
                             return a;
                           });
}

LieVectorD ConnectionSampler::operator()(std::span<const double> x, std::size_t mu) const {
  auto a = fn_(x, mu);
  if (a.size() != dim_) throw DimensionMismatch("connection sampler returned a vector of the wrong length");
  return a;
}

LieVectorD ConnectionSampler::contract(std::span<const double> x, std::span<const double> v) const {
  if (constant_) {
    double sum = 0.0;
    for (double vi : v) sum += vi;
    return sum * *constant_;
  }
  LieVectorD out(dim_);
  for (std::size_t mu = 0; mu < v.size(); ++mu)
    if (v[mu] != 0.0) out += v[mu] * (*this)(x, mu);
  return out;
}

Scheme parse_scheme(std::string_view name) {
  if (name == "euler_paper" || name == "euler") return Scheme::euler_paper;
  if (name == "rk4") return Scheme::rk4;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected euler_paper or rk4)");
}

std::string_view scheme_name(Scheme s) { return s == Scheme::rk4 ? "rk4" : "euler_paper"; }

DualVectorD cartan_rhs(const LieAlgebra& g, const LieVectorD& a_dot_v, const DualVectorD& lambda) {
  g.require_conforms(a_dot_v, "A.v");
  g.require_conforms(lambda, "lambda");
  const std::size_t n = g.dim();
  DualVectorD out(n);
  for (std::size_t a = 0; a < n; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (a_dot_v[b] == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const double cst = g.constant_d(b, a, c);  // C^c_{ba}
        if (cst != 0.0) acc -= cst * a_dot_v[b] * lambda[c];
      }
    }
    out[a] = acc;
  }
  return out;
}

double cfl_bound(const LieAlgebra& g, const LieVectorD& a_dot_v) {
  g.require_conforms(a_dot_v, "A.v");
  const std::size_t n = g.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(g.constant_d(b, a, c) * a_dot_v[b]));
  return worst == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / worst;
}

double norm(const DualVectorD& v) {
  double s = 0.0;
  for (double x : v.coeffs()) s += x * x;
  return std::sqrt(s);
}

namespace {

std::vector<double> advance_base(std::span<const double> x, std::span<const double> v, double ds) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size() && i < v.size(); ++i) out[i] += ds * v[i];
  return out;
}

void require_finite(const DualVectorD& v, const char* where) {
  for (double x : v.coeffs())
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite lambda ") + where);
}

}  // namespace

CharacteristicState step(const LieAlgebra& g, const CharacteristicState& state, const ConnectionSampler& a,
                         std::span<const double> v, double ds, Scheme scheme, bool renormalize) {
  g.require_conforms(state.lambda, "state lambda");
  if (!(ds > 0.0) || !std::isfinite(ds)) throw ConfigError("step size must be positive and finite");
  if (state.x.size() != v.size()) throw DimensionMismatch("base point and velocity differ in length");
  require_finite(state.lambda, "on entry");

  const auto av0 = a.contract(state.x, v);
  const double bound = cfl_bound(g, av0);
  if (ds >= bound) {
    std::ostringstream msg;
    msg << "step " << ds << " violates the CFL condition ds * max|C^c_ba (A.v)^b| < 1 (bound " << bound << ")";
    throw CflViolation(msg.str(), bound);
  }

  CharacteristicState next;
  next.s = state.s + ds;
  next.x = advance_base(state.x, v, ds);

  if (scheme == Scheme::euler_paper) {
    // lambda_a(s + ds) = lambda_a(s) - ds * C^c_{ba} A^b_mu v^mu lambda_c(s)
    next.lambda = state.lambda + ds * cartan_rhs(g, av0, state.lambda);
  } else {
    const auto x_half = advance_base(state.x, v, 0.5 * ds);
    const auto av_half = a.contract(x_half, v);
    const auto av1 = a.contract(next.x, v);
    const auto k1 = cartan_rhs(g, av0, state.lambda);
    const auto k2 = cartan_rhs(g, av_half, state.lambda + (0.5 * ds) * k1);
    const auto k3 = cartan_rhs(g, av_half, state.lambda + (0.5 * ds) * k2);
    const auto k4 = cartan_rhs(g, av1, state.lambda + ds * k3);
    next.lambda = state.lambda + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  require_finite(next.lambda, "after step");

  if (renormalize) {
    const double before = norm(state.lambda);
    const double after = norm(next.lambda);
    if (after > 0.0) next.lambda *= before / after;
  }
  return next;
}

std::vector<CharacteristicState> integrate(const LieAlgebra& g, const CharacteristicState& start,
                                           const ConnectionSampler& a, std::span<const double> v, double ds,
                                           double s_end, Scheme scheme, bool renormalize) {
  if (!(ds > 0.0)) throw ConfigError("step size must be positive");
  if (s_end < start.s) throw ConfigError("s_end precedes the start of the characteristic");
  const double span = s_end - start.s;
  auto steps = static_cast<std::size_t>(std::ceil(span / ds - 1e-9));
  std::vector<CharacteristicState> out;
  out.reserve(steps + 1);
  out.push_back(start);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s_next = (i + 1 == steps) ? s_end : start.s + static_cast<double>(i + 1) * ds;
    const double h = s_next - out.back().s;
    if (h <= 0.0) break;
    auto next = step(g, out.back(), a, v, h, scheme, renormalize);
    next.s = s_next;
    out.push_back(std::move(next));
  }
  return out;
}

Matrix<double> cartan_generator(const LieAlgebra& g, const LieVectorD& a_dot_v) {
  const std::size_t n = g.dim();
  Matrix<double> m(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto col = cartan_rhs(g, a_dot_v, DualVectorD::basis(n, c));
    for (std::size_t a = 0; a < n; ++a) m(a, c) = col[a];
  }
  return m;
}

Matrix<double> matrix_exponential(const Matrix<double>& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix exponential of a non-square matrix");
  const std::size_t n = m.rows();
  double norm1 = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < n; ++r) col += std::abs(m(r, c));
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  Matrix<double> a = m;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) *= scale;

  auto result = Matrix<double>::identity(n);
  auto term = Matrix<double>::identity(n);
  for (int k = 1; k < 60; ++k) {
    term = term * a;
    double tnorm = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        term(r, c) /= static_cast<double>(k);
        result(r, c) += term(r, c);
        tnorm = std::max(tnorm, std::abs(term(r, c)));
      }
    if (tnorm < 1e-14 * 1e-3) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

DualVectorD coadjoint_flow_exact(const LieAlgebra& g, const LieVectorD& a_dot_v, const DualVectorD& lambda0,
                                 double s) {
  g.require_conforms(lambda0, "lambda0");
  auto m = cartan_generator(g, a_dot_v);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) *= s;
  return DualVectorD(matrix_exponential(m).apply(lambda0.coeffs()));
}

double cartan_residual(const LieAlgebra& g, const ConnectionSampler& a, const SampleGrid& grid) {
  if (!(grid.h > 0.0)) throw ConfigError("cartan_residual: grid spacing must be positive");
  if (grid.shape.empty() || grid.origin.size() != grid.shape.size())
    throw ConfigError("cartan_residual: origin and shape must describe the same number of axes");
  std::size_t total = 1;
  for (auto n : grid.shape) {
    if (n < 3) throw ConfigError("cartan_residual: central differences need at least 3 points per axis");
    total *= n;
  }
  if (grid.values.size() != total) throw DimensionMismatch("cartan_residual: sample count differs from grid shape");

  const std::size_t axes = grid.shape.size();
  std::vector<std::size_t> stride(axes, 1);
  for (std::size_t k = axes - 1; k > 0; --k) stride[k - 1] = stride[k] * grid.shape[k];

  double worst = 0.0;
  std::vector<std::size_t> idx(axes);
  std::vector<double> x(axes);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    bool interior = true;
    for (std::size_t k = 0; k < axes; ++k) {
      idx[k] = rem / stride[k];
      rem %= stride[k];
      if (idx[k] == 0 || idx[k] + 1 == grid.shape[k]) interior = false;
      x[k] = grid.origin[k] + grid.h * static_cast<double>(idx[k]);
    }
    if (!interior) continue;
    const auto& lam = grid.values[flat];
    for (std::size_t mu = 0; mu < axes; ++mu) {
      const auto& fwd = grid.values[flat + stride[mu]];
      const auto& bwd = grid.values[flat - stride[mu]];
      const auto drift = cartan_rhs(g, a(x, mu), lam);
      for (std::size_t c = 0; c < g.dim(); ++c) {
        const double d = (fwd[c] - bwd[c]) / (2.0 * grid.h);
        worst = std::max(worst, std::abs(d - drift[c]));
      }
    }
  }
  return worst;
}

MonopoleCheck monopole_radial_check(double q, double r, double h) {
  if (!(h > 0.0) || !(r > h)) throw ConfigError("monopole_radial_check requires r > h > 0");
  auto lambda_r = [q](double rr) { return q / (rr * rr); };
  MonopoleCheck out;
  out.numeric = (lambda_r(r + h) - lambda_r(r - h)) / (2.0 * h);
  out.closed_form = -2.0 * q / (r * r * r);
  out.difference = std::abs(out.numeric - out.closed_form);
  return out;
}

double nonholonomy_coefficient(const LieAlgebra& g, const DualVectorD& lambda, const LieVectorD& omega) {
  g.require_conforms(lambda, "lambda");
  g.require_conforms(omega, "Omega");
  const double n2 = norm(lambda) * norm(lambda);
  if (n2 == 0.0) throw ConfigError("nonholonomy coefficient undefined for lambda = 0");
  return lie::pairing(lambda, omega) / n2;
}

}  // namespace spencer::cartan
