#include "spencer/symcomplex.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace spencer::sym {

using lie::LieAlgebra;
using lie::LieVector;

SymTensor SymTensor::monomial(std::size_t algebra_dim, MultiIndex index, Rational coeff) {
  SymTensor t(algebra_dim, index.size());
  t.add_term(std::move(index), coeff);
  return t;
}

SymTensor SymTensor::from_vector(const LieVector& v) {
  SymTensor t(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) t.add_term({i}, v[i]);
  return t;
}

void SymTensor::add_term(MultiIndex index, const Rational& coeff) {
  if (index.size() != degree_) throw DimensionMismatch("multi-index length differs from tensor degree");
  for (auto i : index)
    if (i >= dim_) throw DimensionMismatch("multi-index entry out of range");
  if (coeff == 0) return;
  std::sort(index.begin(), index.end());
  auto [it, inserted] = terms_.try_emplace(std::move(index), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational SymTensor::coefficient(MultiIndex index) const {
  std::sort(index.begin(), index.end());
  const auto it = terms_.find(index);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational SymTensor::max_abs_coefficient() const {
  Rational m = 0;
  for (const auto& [_, c] : terms_) m = std::max(m, abs_value(c));
  return m;
}

void SymTensor::check_compatible(const SymTensor& o) const {
  if (o.dim_ != dim_) throw DimensionMismatch("symmetric tensors over algebras of different dimension");
  if (o.degree_ != degree_ && !o.is_zero() && !is_zero())
    throw DimensionMismatch("adding symmetric tensors of different degree");
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  check_compatible(o);
  if (is_zero()) degree_ = o.degree_;
  for (const auto& [idx, c] : o.terms_) add_term(idx, c);
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  check_compatible(o);
  if (is_zero()) degree_ = o.degree_;
  for (const auto& [idx, c] : o.terms_) add_term(idx, -c);
  return *this;
}

SymTensor& SymTensor::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [_, c] : terms_) c *= s;
  return *this;
}

std::uint64_t sym_space_dimension(std::size_t algebra_dim, std::size_t degree) {
  // C(n + k - 1, k), accumulated so every intermediate is an integer.
  if (algebra_dim == 0) return degree == 0 ? 1 : 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= degree; ++i) r = r * (algebra_dim - 1 + i) / i;
  return r;
}

std::vector<MultiIndex> monomial_basis(std::size_t algebra_dim, std::size_t degree) {
  std::vector<MultiIndex> out;
  if (degree == 0) {
    out.emplace_back();
    return out;
  }
  if (algebra_dim == 0) return out;
  MultiIndex idx(degree, 0);
  while (true) {
    out.push_back(idx);
    std::size_t pos = degree;
    while (pos > 0 && idx[pos - 1] == algebra_dim - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < degree; ++j) idx[j] = idx[pos - 1];
  }
  return out;
}

SymTensor sym_product(const SymTensor& x, const SymTensor& y) {
  if (x.algebra_dim() != y.algebra_dim()) throw DimensionMismatch("sym_product: algebras differ");
  SymTensor out(x.algebra_dim(), x.degree() + y.degree());
  for (const auto& [ix, cx] : x.terms())
    for (const auto& [iy, cy] : y.terms()) {
      MultiIndex merged;
      merged.reserve(ix.size() + iy.size());
      std::merge(ix.begin(), ix.end(), iy.begin(), iy.end(), std::back_inserter(merged));
      out.add_term(std::move(merged), cx * cy);
    }
  return out;
}

SymTensor derivation_action(const LieAlgebra& g, const LieVector& y, const SymTensor& x) {
  g.require_conforms(y, "derivation generator");
  if (x.algebra_dim() != g.dim()) throw DimensionMismatch("tensor does not conform to the algebra");
  const std::size_t n = g.dim();
  SymTensor out(n, x.degree());
  for (const auto& [idx, coeff] : x.terms())
    for (std::size_t slot = 0; slot < idx.size(); ++slot) {
      // [Y, e_{i_slot}] = sum_{a,c} Y^a C^c_{a i_slot} e_c
      for (std::size_t a = 0; a < n; ++a) {
        if (y[a] == 0) continue;
        for (std::size_t c = 0; c < n; ++c) {
          const Rational& cst = g.constant(a, idx[slot], c);
          if (cst == 0) continue;
          MultiIndex replaced = idx;
          replaced[slot] = c;
          out.add_term(std::move(replaced), coeff * y[a] * cst);
        }
      }
    }
  return out;
}

SymTensor spencer_delta_structural(const LieAlgebra& g, const SymTensor& x) {
  const std::size_t n = g.dim();
  SymTensor out(n, x.degree() + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ei = LieVector::basis(n, i);
    out += sym_product(SymTensor::monomial(n, {i}), derivation_action(g, ei, x));
  }
  return out;
}

SymTensor spencer_delta_curvature(const LieAlgebra& g, const LieVector& omega, const SymTensor& x) {
  return derivation_action(g, omega, x);
}

Matrix<Rational> sym_representation(const LieAlgebra& g, std::size_t a, std::size_t p) {
  const std::size_t n = g.dim();
  const auto basis = monomial_basis(n, p);
  std::map<MultiIndex, std::size_t> position;
  for (std::size_t i = 0; i < basis.size(); ++i) position[basis[i]] = i;
  Matrix<Rational> m(basis.size(), basis.size());
  const auto ea = LieVector::basis(n, a);
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto image = derivation_action(g, ea, SymTensor::monomial(n, basis[col]));
    for (const auto& [idx, c] : image.terms()) m(position.at(idx), col) = c;
  }
  return m;
}

namespace {

using Wedge = std::vector<std::size_t>;

std::vector<Wedge> wedge_basis(std::size_t n, std::size_t q) {
  std::vector<Wedge> out;
  if (q > n) return out;
  Wedge w(q);
  for (std::size_t i = 0; i < q; ++i) w[i] = i;
  while (true) {
    out.push_back(w);
    std::size_t pos = q;
    while (pos > 0 && w[pos - 1] == n - q + pos - 1) --pos;
    if (pos == 0) break;
    ++w[pos - 1];
    for (std::size_t j = pos; j < q; ++j) w[j] = w[j - 1] + 1;
  }
  return out;
}

// Sorts `w` in place; returns the permutation sign, or 0 if an index repeats.
int sort_with_sign(Wedge& w) {
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i)
    for (std::size_t j = i; j > 0 && w[j - 1] >= w[j]; --j) {
      if (w[j - 1] == w[j]) return 0;
      std::swap(w[j - 1], w[j]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

Matrix<Rational> ce_differential(const LieAlgebra& g, std::size_t p, std::size_t q) {
  const std::size_t n = g.dim();
  const auto src = wedge_basis(n, q);
  const auto dst = wedge_basis(n, q + 1);
  const std::size_t mdim = sym_space_dimension(n, p);
  Matrix<Rational> d(dst.size() * mdim, src.size() * mdim);
  if (dst.empty() || src.empty()) return d;

  std::map<Wedge, std::size_t> src_pos;
  for (std::size_t i = 0; i < src.size(); ++i) src_pos[src[i]] = i;
  std::vector<Matrix<Rational>> rho;
  for (std::size_t a = 0; a < n; ++a) rho.push_back(sym_representation(g, a, p));

  // (d phi)(x_0..x_q) = sum_i (-1)^i x_i . phi(..^x_i..)
  //                   + sum_{i<j} (-1)^{i+j} phi([x_i, x_j], ..^x_i..^x_j..)
  for (std::size_t t = 0; t < dst.size(); ++t) {
    const Wedge& tuple = dst[t];
    for (std::size_t i = 0; i <= q; ++i) {
      Wedge rest;
      for (std::size_t k = 0; k <= q; ++k)
        if (k != i) rest.push_back(tuple[k]);
      const std::size_t s = src_pos.at(rest);
      const Rational sign = (i % 2 == 0) ? 1 : -1;
      const auto& r = rho[tuple[i]];
      for (std::size_t row = 0; row < mdim; ++row)
        for (std::size_t col = 0; col < mdim; ++col)
          if (r(row, col) != 0) d(t * mdim + row, s * mdim + col) += sign * r(row, col);
    }
    for (std::size_t i = 0; i <= q; ++i)
      for (std::size_t j = i + 1; j <= q; ++j) {
        const Rational sign = ((i + j) % 2 == 0) ? 1 : -1;
        for (std::size_t c = 0; c < n; ++c) {
          const Rational& cst = g.constant(tuple[i], tuple[j], c);
          if (cst == 0) continue;
          Wedge args{c};
          for (std::size_t k = 0; k <= q; ++k)
            if (k != i && k != j) args.push_back(tuple[k]);
          const int perm = sort_with_sign(args);
          if (perm == 0) continue;
          const std::size_t s = src_pos.at(args);
          for (std::size_t m = 0; m < mdim; ++m) d(t * mdim + m, s * mdim + m) += sign * perm * cst;
        }
      }
  }
  return d;
}

std::size_t ce_cohomology_dim(const LieAlgebra& g, std::size_t p, std::size_t q) {
  if (q > g.dim()) throw DimensionMismatch("cochain degree exceeds the algebra dimension");
  const std::size_t n = g.dim();
  const std::size_t mdim = sym_space_dimension(n, p);
  const std::size_t cochains = wedge_basis(n, q).size() * mdim;
  const std::size_t rank_out = q < n ? rank(ce_differential(g, p, q)) : 0;
  const std::size_t rank_in = q > 0 ? rank(ce_differential(g, p, q - 1)) : 0;
  return cochains - rank_out - rank_in;
}

BettiFactorTable sym_dimension_factor(const LieAlgebra& g, std::size_t max_p) {
  BettiFactorTable t{"sym", {}};
  for (std::size_t p = 0; p <= max_p; ++p) t.f.push_back({sym_space_dimension(g.dim(), p)});
  return t;
}

BettiFactorTable whitehead_factor(const LieAlgebra& g, std::size_t max_p) {
  BettiFactorTable t{"whitehead", {}};
  for (std::size_t p = 0; p <= max_p; ++p) {
    std::vector<std::uint64_t> row;
    for (std::size_t q = 0; q <= g.dim(); ++q) row.push_back(ce_cohomology_dim(g, p, q));
    t.f.push_back(std::move(row));
  }
  return t;
}

std::vector<std::uint64_t> spencer_betti(const std::vector<std::uint64_t>& base_betti,
                                         const BettiFactorTable& factor) {
  if (base_betti.empty()) throw ConfigError("base Betti numbers must be non-empty");
  std::vector<std::uint64_t> out(base_betti.size(), 0);
  for (std::size_t k = 0; k < base_betti.size(); ++k)
    for (std::size_t p = 0; p <= k; ++p) out[k] += base_betti[k - p] * factor.at(p, 0);
  return out;
}

std::map<std::size_t, Rational> nilpotency_report(const LieAlgebra& g, std::size_t max_degree) {
  if (max_degree < 1) throw ConfigError("nilpotency_report needs max_degree >= 1");
  std::map<std::size_t, Rational> out;
  for (std::size_t k = 1; k <= max_degree; ++k) {
    Rational worst = 0;
    for (const auto& idx : monomial_basis(g.dim(), k)) {
      const auto twice = spencer_delta_structural(g, spencer_delta_structural(g, SymTensor::monomial(g.dim(), idx)));
      worst = std::max(worst, twice.max_abs_coefficient());
    }
    out[k] = worst;
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '/'; });
}

}  // namespace

SymTensor parse_sym_tensor(const LieAlgebra& g, std::string_view text) {
  std::vector<std::pair<int, std::string>> pieces;
  std::string current;
  int sign = 1;
  for (char ch : text) {
    if ((ch == '+' || ch == '-') && !trim(current).empty()) {
      pieces.emplace_back(sign, trim(current));
      current.clear();
      sign = ch == '-' ? -1 : 1;
    } else if ((ch == '+' || ch == '-')) {
      if (ch == '-') sign = -sign;
    } else {
      current += ch;
    }
  }
  if (!trim(current).empty()) pieces.emplace_back(sign, trim(current));
  if (pieces.empty()) throw ConfigError("empty tensor expression");

  std::optional<SymTensor> out;
  for (const auto& [sgn, term] : pieces) {
    Rational coeff = sgn;
    MultiIndex idx;
    std::stringstream ss(term);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      factor = trim(factor);
      if (is_number(factor)) {
        try {
          coeff *= Rational(factor);
        } catch (const std::exception&) {
          throw ConfigError("bad coefficient '" + factor + "'");
        }
        continue;
      }
      const auto& labels = g.labels();
      const auto it = std::find(labels.begin(), labels.end(), factor);
      if (it == labels.end()) throw ConfigError("unknown basis label '" + factor + "' in tensor expression");
      idx.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    if (!out) out.emplace(g.dim(), idx.size());
    if (idx.size() != out->degree()) throw ConfigError("tensor expression mixes degrees");
    out->add_term(std::move(idx), coeff);
  }
  return *out;
}

std::string format_sym_tensor(const LieAlgebra& g, const SymTensor& x) {
  if (x.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [idx, c] : x.terms()) {
    Rational mag = abs_value(c);
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t k = 0; k < idx.size(); ++k) mono += (k ? "*" : "") + g.labels()[idx[k]];
    if (mono.empty())
      s += mag.str();
    else if (mag == 1)
      s += mono;
    else
      s += mag.str() + "*" + mono;
  }
  return s;
}

}  // namespace spencer::sym
