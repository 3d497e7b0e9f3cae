#include "spencer/liealg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef SPENCER_DEFAULT_DATA_DIR
#define SPENCER_DEFAULT_DATA_DIR "data"
#endif

namespace spencer::lie {

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> labels, std::vector<Rational> constants)
    : name_(std::move(name)), dim_(labels.size()), labels_(std::move(labels)), exact_(std::move(constants)) {
  if (dim_ == 0) throw ConfigError("Lie algebra dimension must be positive");
  if (exact_.size() != dim_ * dim_ * dim_)
    throw DimensionMismatch("structure constant table must have dim^3 entries");
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t c = 0; c < dim_; ++c)
        if (constant(a, b, c) != -constant(b, a, c))
          throw ConfigError("structure constants are not antisymmetric at (a,b,c)=(" + std::to_string(a) + "," +
                            std::to_string(b) + "," + std::to_string(c) + ")");
  approx_.reserve(exact_.size());
  for (const auto& v : exact_) approx_.push_back(spencer::to_double(v));
}

LieAlgebra LieAlgebra::from_entries(std::string name, std::vector<std::string> labels,
                                    std::span<const StructureEntry> entries) {
  const std::size_t n = labels.size();
  std::vector<Rational> table(n * n * n);
  std::vector<bool> set(table.size(), false);
  auto at = [n](std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; };
  for (const auto& e : entries) {
    if (e.a >= n || e.b >= n || e.c >= n) throw ConfigError("structure constant index out of range");
    if (e.a == e.b) {
      if (e.value != 0) throw ConfigError("nonzero structure constant on a diagonal pair");
      continue;
    }
    const auto i = at(e.a, e.b, e.c);
    const auto j = at(e.b, e.a, e.c);
    if ((set[i] && table[i] != e.value) || (set[j] && table[j] != -e.value))
      throw ConfigError("contradictory structure constants for pair (" + std::to_string(e.a) + "," +
                        std::to_string(e.b) + ")");
    table[i] = e.value;
    table[j] = -e.value;
    set[i] = set[j] = true;
  }
  return LieAlgebra(std::move(name), std::move(labels), std::move(table));
}

LieAlgebra LieAlgebra::abelian(std::size_t dim) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  return LieAlgebra("abelian" + std::to_string(dim), std::move(labels), std::vector<Rational>(dim * dim * dim));
}

bool LieAlgebra::is_abelian() const {
  return std::all_of(exact_.begin(), exact_.end(), [](const Rational& r) { return r == 0; });
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SPENCER_DATA_DIR"); env && *env) return env;
  return SPENCER_DEFAULT_DATA_DIR;
}

LieAlgebra parse_algebra_json(std::string_view text, std::string name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed algebra JSON: ") + e.what());
  }
  try {
    for (const auto& [key, _] : doc.items())
      if (key != "dim" && key != "labels" && key != "constants" && key != "name" && key != "description")
        throw ConfigError("unknown key in algebra JSON: " + key);
    const auto dim = doc.at("dim").get<std::size_t>();
    std::vector<std::string> labels;
    if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
    if (labels.empty())
      for (std::size_t i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
    if (labels.size() != dim) throw ConfigError("labels length differs from dim");
    if (doc.contains("name")) name = doc.at("name").get<std::string>();
    std::vector<StructureEntry> entries;
    for (const auto& row : doc.at("constants")) {
      if (!row.is_array() || row.size() != 5) throw ConfigError("constant rows must be [a,b,c,num,den]");
      const auto den = row[4].get<std::int64_t>();
      if (den == 0) throw ConfigError("zero denominator in structure constant");
      entries.push_back({row[0].get<std::size_t>(), row[1].get<std::size_t>(), row[2].get<std::size_t>(),
                         Rational(row[3].get<std::int64_t>(), den)});
    }
    return LieAlgebra::from_entries(std::move(name), std::move(labels), entries);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid algebra JSON: ") + e.what());
  }
}

LieAlgebra load_algebra_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open algebra file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_algebra_json(ss.str(), path.stem().string());
}

LieAlgebra load_preset(std::string_view name) {
  const auto file = data_dir() / "algebras" / (std::string(name) + ".json");
  if (std::filesystem::exists(file)) return load_algebra_file(file);
  if (name.starts_with("abelian")) {
    const auto digits = name.substr(7);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(ch); })) {
      const auto n = static_cast<std::size_t>(std::stoul(std::string(digits)));
      if (n > 0) return LieAlgebra::abelian(n);
    }
  }
  throw ConfigError("unknown algebra preset '" + std::string(name) + "'");
}

LieAlgebra resolve_algebra(std::string_view name_or_path) {
  if (name_or_path.ends_with(".json")) return load_algebra_file(std::filesystem::path(name_or_path));
  return load_preset(name_or_path);
}

Rational jacobi_residual(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  std::vector<LieVector> basis;
  for (std::size_t i = 0; i < n; ++i) basis.push_back(LieVector::basis(n, i));
  Rational worst = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto& x = basis[a];
        const auto& y = basis[b];
        const auto& z = basis[c];
        const auto sum = bracket(g, x, bracket(g, y, z)) + bracket(g, y, bracket(g, z, x)) +
                         bracket(g, z, bracket(g, x, y));
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, abs_value(sum[k]));
      }
  return worst;
}

Matrix<Rational> killing_form(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  std::vector<Matrix<Rational>> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(ad_matrix(g, LieVector::basis(n, i)));
  Matrix<Rational> b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      b(i, j) = (ads[i] * ads[j]).trace();
      b(j, i) = b(i, j);
    }
  return b;
}

bool is_semisimple(const LieAlgebra& g) { return determinant(killing_form(g)) != 0; }

std::vector<LieVector> center_basis(const LieAlgebra& g) {
  // X is central iff [X, e_b] = 0 for all b; stack the maps X -> [X, e_b].
  const std::size_t n = g.dim();
  Matrix<Rational> stacked(n * n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) stacked(b * n + c, a) = g.constant(a, b, c);
  std::vector<LieVector> out;
  for (auto& v : nullspace(std::move(stacked))) out.emplace_back(std::move(v));
  return out;
}

std::vector<LieVector> stabilizer_subalgebra(const LieAlgebra& g, const DualVector& lambda) {
  g.require_conforms(lambda, "stabilizer covector");
  const std::size_t n = g.dim();
  // Column b: ad*_{e_b} lambda.
  Matrix<Rational> m(n, n);
  for (std::size_t b = 0; b < n; ++b) {
    const auto col = coad_apply(g, LieVector::basis(n, b), lambda);
    for (std::size_t a = 0; a < n; ++a) m(a, b) = col[a];
  }
  std::vector<LieVector> out;
  for (auto& v : nullspace(std::move(m))) out.emplace_back(std::move(v));
  return out;
}

bool integrability_check(const LieAlgebra& g, const LieVector& omega, const DualVector& lambda) {
  return coad_curvature_action(g, omega, lambda).is_zero();
}

}  // namespace spencer::lie
