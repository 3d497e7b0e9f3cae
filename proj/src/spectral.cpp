#include "spencer/spectral.hpp"

#include <fftw3.h>

#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace spencer::spectral {

void GridSpec::validate() const {
  if (n < 16 || !std::has_single_bit(n)) throw ConfigError("grid N must be a power of two >= 16, got " + std::to_string(n));
  if (!(length > 0.0)) throw ConfigError("grid length L must be positive");
}

long GridSpec::mode_y(std::size_t jy) const noexcept {
  return jy <= n / 2 ? static_cast<long>(jy) : static_cast<long>(jy) - static_cast<long>(n);
}

double GridSpec::ky(std::size_t jy) const noexcept {
  return 2.0 * std::numbers::pi / length * static_cast<double>(mode_y(jy));
}

double GridSpec::kx(std::size_t ix) const noexcept {
  return 2.0 * std::numbers::pi / length * static_cast<double>(ix);
}

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

const Transform& Transform::get(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<Transform>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) slot.reset(new Transform(n));
  return *slot;
}

Transform::Transform(std::size_t n) : n_(n) {
  const int ni = static_cast<int>(n);
  std::vector<double> real(n * n);
  std::vector<Complex> spec(n * (n / 2 + 1));
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  // ESTIMATE keeps the plan (and therefore the rounding) identical across runs.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  r2c_ = fftw_plan_dft_r2c_2d(ni, ni, real.data(), cplx, flags);
  c2r_ = fftw_plan_dft_c2r_2d(ni, ni, cplx, real.data(), flags | FFTW_DESTROY_INPUT);
  if (!r2c_ || !c2r_) throw Error("FFTW failed to create plans for N=" + std::to_string(n));
}

Transform::~Transform() {
  std::lock_guard lock(planner_mutex());
  if (r2c_) fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  if (c2r_) fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

std::vector<Complex> Transform::forward(std::span<const double> field) const {
  if (field.size() != n_ * n_) throw DimensionMismatch("forward transform: field size differs from N*N");
  std::vector<double> in(field.begin(), field.end());
  std::vector<Complex> out(n_ * (n_ / 2 + 1));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> Transform::inverse(std::span<const Complex> coeffs) const {
  if (coeffs.size() != n_ * (n_ / 2 + 1)) throw DimensionMismatch("inverse transform: spectrum size mismatch");
  std::vector<Complex> in(coeffs.begin(), coeffs.end());
  std::vector<double> out(n_ * n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_ * n_);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<Complex> zero_pad(std::span<const Complex> coeffs, std::size_t n, std::size_t m) {
  const std::size_t nc = n / 2 + 1;
  const std::size_t mc = m / 2 + 1;
  if (coeffs.size() != n * nc) throw DimensionMismatch("zero_pad: spectrum size mismatch");
  if (m < n) throw ConfigError("zero_pad: target size smaller than source");
  if (m == n) return {coeffs.begin(), coeffs.end()};

  const double scale = static_cast<double>(m) * static_cast<double>(m) / (static_cast<double>(n) * static_cast<double>(n));
  std::vector<Complex> out(m * mc);
  const std::size_t half = n / 2;
  for (std::size_t jy = 0; jy < n; ++jy) {
    for (std::size_t ix = 0; ix < nc; ++ix) {
      Complex v = coeffs[jy * nc + ix] * scale;
      if (ix == half) v *= 0.5;
      if (jy == half) {
        v *= 0.5;
        out[half * mc + ix] += v;
        out[(m - half) * mc + ix] += v;
      } else {
        const std::size_t row = jy < half ? jy : m - n + jy;
        out[row * mc + ix] += v;
      }
    }
  }
  return out;
}

}  // namespace spencer::spectral
