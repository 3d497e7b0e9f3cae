#pragma once

// Symmetric algebra Sym(g), the two Spencer-type differentials on it, and
// Chevalley-Eilenberg cohomology with coefficients in Sym^p(g).

#include "spencer/exact_linalg.hpp"
#include "spencer/liealg.hpp"
#include "spencer/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace spencer::sym {

/// Sorted (non-decreasing) list of basis indices i_1 <= ... <= i_k.
using MultiIndex = std::vector<std::size_t>;

/// Element of Sym^k(g): a finite sum of coefficient * e_{i_1} . ... . e_{i_k}.
class SymTensor {
 public:
  SymTensor(std::size_t algebra_dim, std::size_t degree) : dim_(algebra_dim), degree_(degree) {}

  static SymTensor monomial(std::size_t algebra_dim, MultiIndex index, Rational coeff = 1);
  static SymTensor from_vector(const lie::LieVector& v);

  std::size_t algebra_dim() const noexcept { return dim_; }
  std::size_t degree() const noexcept { return degree_; }
  const std::map<MultiIndex, Rational>& terms() const noexcept { return terms_; }

  /// Adds coeff to the term at `index` (any order; it is sorted). Zero results are pruned.
  void add_term(MultiIndex index, const Rational& coeff);
  Rational coefficient(MultiIndex index) const;

  bool is_zero() const noexcept { return terms_.empty(); }
  Rational max_abs_coefficient() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(const Rational& s);
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(const Rational& s, SymTensor a) { return a *= s; }
  friend bool operator==(const SymTensor&, const SymTensor&) = default;

 private:
  void check_compatible(const SymTensor& o) const;

  std::size_t dim_;
  std::size_t degree_;
  std::map<MultiIndex, Rational> terms_;
};

/// dim Sym^k(g) = C(n + k - 1, k).
std::uint64_t sym_space_dimension(std::size_t algebra_dim, std::size_t degree);

/// All sorted multi-indices of length `degree`, in lexicographic order.
std::vector<MultiIndex> monomial_basis(std::size_t algebra_dim, std::size_t degree);

SymTensor sym_product(const SymTensor& x, const SymTensor& y);

/// Derivation extension of ad_Y: X_1...X_k -> sum_j X_1 ... [Y, X_j] ... X_k.
SymTensor derivation_action(const lie::LieAlgebra& g, const lie::LieVector& y, const SymTensor& x);

/// delta(X_1...X_k) = sum_i sum_j e_i . X_1 ... [e_i, X_j] ... X_k   (degree k -> k + 1)
SymTensor spencer_delta_structural(const lie::LieAlgebra& g, const SymTensor& x);

/// delta_Omega(X_1...X_k) = sum_i [Omega, X_i] . prod_{j != i} X_j   (degree-preserving).
/// The scalar 2-form factor multiplying Omega is carried by the caller.
SymTensor spencer_delta_curvature(const lie::LieAlgebra& g, const lie::LieVector& omega, const SymTensor& x);

/// Matrix of e_a acting on Sym^p(g) in the monomial_basis ordering.
Matrix<Rational> sym_representation(const lie::LieAlgebra& g, std::size_t a, std::size_t p);

/// Chevalley-Eilenberg differential C^q(g, Sym^p g) -> C^{q+1}(g, Sym^p g).
/// Cochain coordinates are indexed (wedge tuple, module basis) with the module index fastest.
Matrix<Rational> ce_differential(const lie::LieAlgebra& g, std::size_t p, std::size_t q);

/// dim H^q(g, Sym^p g), computed by exact rank of the CE differentials.
std::size_t ce_cohomology_dim(const lie::LieAlgebra& g, std::size_t p, std::size_t q);

/// Per-bidegree factors f[p][q]. The Betti convolution consumes the q = 0 column.
struct BettiFactorTable {
  std::string preset;
  std::vector<std::vector<std::uint64_t>> f;

  std::uint64_t at(std::size_t p, std::size_t q) const {
    if (p >= f.size() || q >= f[p].size()) return 0;
    return f[p][q];
  }
};

/// f[p][0] = dim Sym^p(g) for p <= max_p.
BettiFactorTable sym_dimension_factor(const lie::LieAlgebra& g, std::size_t max_p);

/// f[p][q] = dim H^q(g, Sym^p g) for p <= max_p, q <= dim g.
BettiFactorTable whitehead_factor(const lie::LieAlgebra& g, std::size_t max_p);

/// beta_k = sum_{p + q = k} base[q] * f[p][0], for k < base.size().
std::vector<std::uint64_t> spencer_betti(const std::vector<std::uint64_t>& base_betti, const BettiFactorTable& factor);

/// Degree -> max-norm of delta(delta(m)) over the monomial basis of that degree.
std::map<std::size_t, Rational> nilpotency_report(const lie::LieAlgebra& g, std::size_t max_degree);

/// Parses "2*e1*e2 - 1/2*e3*e3" using the algebra's basis labels.
SymTensor parse_sym_tensor(const lie::LieAlgebra& g, std::string_view text);
std::string format_sym_tensor(const lie::LieAlgebra& g, const SymTensor& x);

}  // namespace spencer::sym
