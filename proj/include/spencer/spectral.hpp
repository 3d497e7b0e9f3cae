#pragma once

// Real 2D periodic transforms on an N x N grid. Fields are row-major with the
// row index along y and the column index along x. Spectral arrays use the
// half-complex layout N x (N/2 + 1): row jy carries ky, column ix carries kx.
// Forward transforms are unnormalized; inverse transforms divide by N^2.

#include "spencer/error.hpp"

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace spencer::spectral {

using Complex = std::complex<double>;

struct GridSpec {
  std::size_t n = 128;
  double length = 2.0 * std::numbers::pi;

  /// Throws ConfigError unless n is a power of two >= 16 and length > 0.
  void validate() const;
  double spacing() const noexcept { return length / static_cast<double>(n); }
  std::size_t points() const noexcept { return n * n; }
  std::size_t spectral_cols() const noexcept { return n / 2 + 1; }
  std::size_t spectral_size() const noexcept { return n * spectral_cols(); }
  /// Physical wavenumber of spectral row jy / column ix.
  double ky(std::size_t jy) const noexcept;
  double kx(std::size_t ix) const noexcept;
  /// Signed integer mode number of row jy.
  long mode_y(std::size_t jy) const noexcept;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// FFTW-backed transforms for one grid size. Plans are cached per size and
/// shared; execution on distinct arrays is thread-safe.
class Transform {
 public:
  static const Transform& get(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::vector<Complex> forward(std::span<const double> field) const;
  std::vector<double> inverse(std::span<const Complex> coeffs) const;

  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

 private:
  explicit Transform(std::size_t n);
  std::size_t n_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

inline std::vector<Complex> forward(const GridSpec& g, std::span<const double> field) {
  return Transform::get(g.n).forward(field);
}
inline std::vector<double> inverse(const GridSpec& g, std::span<const Complex> coeffs) {
  return Transform::get(g.n).inverse(coeffs);
}

/// Zero-pads a half-complex spectrum of size n to size m >= n, splitting
/// Nyquist modes evenly so that real fields stay real and coarse-grid values are
/// reproduced exactly. The result is scaled for Transform::get(m).inverse.
std::vector<Complex> zero_pad(std::span<const Complex> coeffs, std::size_t n, std::size_t m);

}  // namespace spencer::spectral
