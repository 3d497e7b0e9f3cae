#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace spencer {

using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double r) { return r; }

inline Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }
inline double abs_value(double r) { return r < 0 ? -r : r; }

inline std::string to_string(const Rational& r) { return r.str(); }

/// Zero test that is exact for rationals and bitwise for doubles.
template <class T>
bool is_zero(const T& v) {
  return v == T(0);
}

}  // namespace spencer
