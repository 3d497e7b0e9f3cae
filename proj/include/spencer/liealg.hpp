#pragma once

// Finite-dimensional Lie algebras given by structure constants.
//
// Index convention used throughout the library:
//
//     [e_a, e_b] = sum_c C^c_{ab} e_c,      constant(a, b, c) == C^c_{ab}
//
// Every formula that the literature writes with a different index order is
// translated into this one at its definition site.

#include "spencer/error.hpp"
#include "spencer/exact_linalg.hpp"
#include "spencer/rational.hpp"

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace spencer::lie {

struct VectorTag {};
struct CovectorTag {};

/// Coefficient vector in a fixed basis. Tag separates g from g*.
template <class T, class Tag>
class Coefficients {
 public:
  using value_type = T;

  Coefficients() = default;
  explicit Coefficients(std::size_t dim) : c_(dim, T(0)) {}
  explicit Coefficients(std::vector<T> c) : c_(std::move(c)) {}
  Coefficients(std::initializer_list<T> c) : c_(c) {}

  static Coefficients basis(std::size_t dim, std::size_t i) {
    Coefficients v(dim);
    v.c_.at(i) = T(1);
    return v;
  }

  std::size_t size() const noexcept { return c_.size(); }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  std::span<const T> coeffs() const noexcept { return c_; }
  std::vector<T>& raw() noexcept { return c_; }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!spencer::is_zero(v)) return false;
    return true;
  }

  Coefficients& operator+=(const Coefficients& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Coefficients& operator-=(const Coefficients& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Coefficients& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Coefficients operator+(Coefficients a, const Coefficients& b) { return a += b; }
  friend Coefficients operator-(Coefficients a, const Coefficients& b) { return a -= b; }
  friend Coefficients operator*(const T& s, Coefficients a) { return a *= s; }
  friend Coefficients operator-(Coefficients a) { return a *= T(-1); }
  friend bool operator==(const Coefficients&, const Coefficients&) = default;

 private:
  void check(const Coefficients& o) const {
    if (o.size() != size()) throw DimensionMismatch("coefficient vectors of different length");
  }
  std::vector<T> c_;
};

template <class T>
using LieVectorT = Coefficients<T, VectorTag>;
template <class T>
using DualVectorT = Coefficients<T, CovectorTag>;

using LieVector = LieVectorT<Rational>;
using DualVector = DualVectorT<Rational>;
using LieVectorD = LieVectorT<double>;
using DualVectorD = DualVectorT<double>;

template <class T>
LieVectorD to_double(const LieVectorT<T>& v) {
  LieVectorD out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = spencer::to_double(v[i]);
  return out;
}
template <class T>
DualVectorD to_double(const DualVectorT<T>& v) {
  DualVectorD out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = spencer::to_double(v[i]);
  return out;
}

/// One nonzero structure constant C^c_{ab}, as read from a JSON table.
struct StructureEntry {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
  Rational value;
};

class LieAlgebra {
 public:
  /// `constants` is the dense table indexed [a][b][c]; it must be antisymmetric in (a, b).
  LieAlgebra(std::string name, std::vector<std::string> labels, std::vector<Rational> constants);

  /// Builds the table from a sparse list. Each entry also sets its antisymmetric
  /// partner; contradictory or diagonal entries are rejected.
  static LieAlgebra from_entries(std::string name, std::vector<std::string> labels,
                                 std::span<const StructureEntry> entries);

  static LieAlgebra abelian(std::size_t dim);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// C^c_{ab}
  const Rational& constant(std::size_t a, std::size_t b, std::size_t c) const {
    return exact_[(a * dim_ + b) * dim_ + c];
  }
  double constant_d(std::size_t a, std::size_t b, std::size_t c) const {
    return approx_[(a * dim_ + b) * dim_ + c];
  }
  template <class T>
  T constant_as(std::size_t a, std::size_t b, std::size_t c) const {
    if constexpr (std::is_same_v<T, double>)
      return constant_d(a, b, c);
    else
      return T(constant(a, b, c));
  }

  bool is_abelian() const;

  template <class V>
  void require_conforms(const V& v, std::string_view what) const {
    if (v.size() != dim_)
      throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(dim_) +
                              ", got " + std::to_string(v.size()));
  }

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<std::string> labels_;
  std::vector<Rational> exact_;
  std::vector<double> approx_;
};

// ---- presets and loading ---------------------------------------------------

/// Directory holding versioned preset files. $SPENCER_DATA_DIR overrides the build-time default.
std::filesystem::path data_dir();

/// "su2", "so3", "sl2", "abelian2" are read from data/algebras/<name>.json;
/// "abelian<n>" for any other n is generated.
LieAlgebra load_preset(std::string_view name);

/// JSON document {dim, labels, constants: [[a,b,c,num,den], ...]} with 0-based indices.
LieAlgebra load_algebra_file(const std::filesystem::path& path);
LieAlgebra parse_algebra_json(std::string_view text, std::string name = "custom");

/// A preset name or a path to a JSON file.
LieAlgebra resolve_algebra(std::string_view name_or_path);

// ---- operations ------------------------------------------------------------

template <class T>
LieVectorT<T> bracket(const LieAlgebra& g, const LieVectorT<T>& x, const LieVectorT<T>& y) {
  g.require_conforms(x, "bracket lhs");
  g.require_conforms(y, "bracket rhs");
  const std::size_t n = g.dim();
  LieVectorT<T> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (is_zero(x[a])) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (is_zero(y[b])) continue;
      const T xy = x[a] * y[b];
      for (std::size_t c = 0; c < n; ++c) {
        const T cab = g.constant_as<T>(a, b, c);
        if (!is_zero(cab)) out[c] += cab * xy;
      }
    }
  }
  return out;
}

template <class T>
T pairing(const DualVectorT<T>& lambda, const LieVectorT<T>& x) {
  if (lambda.size() != x.size()) throw DimensionMismatch("pairing: length mismatch");
  T s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += lambda[i] * x[i];
  return s;
}

/// Max-norm over basis triples of [e_a,[e_b,e_c]] + [e_b,[e_c,e_a]] + [e_c,[e_a,e_b]].
Rational jacobi_residual(const LieAlgebra& g);

/// Column b holds [X, e_b]: ad(X)_{cb} = sum_a C^c_{ab} X^a.
template <class T>
Matrix<T> ad_matrix(const LieAlgebra& g, const LieVectorT<T>& x) {
  g.require_conforms(x, "ad_matrix");
  const std::size_t n = g.dim();
  Matrix<T> m(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    if (is_zero(x[a])) continue;
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const T cab = g.constant_as<T>(a, b, c);
        if (!is_zero(cab)) m(c, b) += cab * x[a];
      }
  }
  return m;
}

/// Matrix of lambda -> ad*_X lambda, defined by <ad*_X lambda, Y> = -<lambda, [X, Y]>.
template <class T>
Matrix<T> coad_matrix(const LieAlgebra& g, const LieVectorT<T>& x) {
  return -ad_matrix(g, x).transpose();
}

template <class T>
DualVectorT<T> coad_apply(const LieAlgebra& g, const LieVectorT<T>& x, const DualVectorT<T>& lambda) {
  g.require_conforms(lambda, "coadjoint covector");
  return DualVectorT<T>(coad_matrix(g, x).apply(lambda.coeffs()));
}

/// B_ab = tr(ad_{e_a} ad_{e_b}).
Matrix<Rational> killing_form(const LieAlgebra& g);
bool is_semisimple(const LieAlgebra& g);
std::vector<LieVector> center_basis(const LieAlgebra& g);

/// Basis of {X : ad*_X lambda = 0}.
std::vector<LieVector> stabilizer_subalgebra(const LieAlgebra& g, const DualVector& lambda);

/// (ad*_Omega lambda)_a = sum_{b,c} C^c_{ab} Omega^b lambda_c, the Lie-algebraic coefficient of
/// the curvature-coadjoint term. Written with the written-out index order C^c_{ab}; under our
/// convention this equals coad_apply(g, Omega, lambda).
template <class T>
DualVectorT<T> coad_curvature_action(const LieAlgebra& g, const LieVectorT<T>& omega,
                                     const DualVectorT<T>& lambda) {
  g.require_conforms(omega, "curvature component");
  g.require_conforms(lambda, "covector");
  const std::size_t n = g.dim();
  DualVectorT<T> out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (is_zero(omega[b])) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const T cab = g.constant_as<T>(a, b, c);
        if (!is_zero(cab)) out[a] += cab * omega[b] * lambda[c];
      }
    }
  return out;
}

/// True when the curvature-coadjoint coefficient vanishes exactly.
bool integrability_check(const LieAlgebra& g, const LieVector& omega, const DualVector& lambda);

}  // namespace spencer::lie
