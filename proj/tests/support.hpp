#pragma once

// Helpers shared by the unit tests: seeded random rationals and small oracles
// that do not go through the library code under test.

#include "spencer/liealg.hpp"

#include <random>

namespace testing {

using spencer::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline Rational random_rational(int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, span);
  return Rational(num(rng()), den(rng()));
}

inline spencer::lie::LieVector random_vector(std::size_t n) {
  spencer::lie::LieVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = random_rational();
  return v;
}

inline spencer::lie::DualVector random_covector(std::size_t n) {
  spencer::lie::DualVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = random_rational();
  return v;
}

}  // namespace testing
