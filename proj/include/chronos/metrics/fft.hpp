#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "chronos/error.hpp"

namespace chronos {

inline std::size_t next_pow2(std::size_t n) { return n <= 1 ? 1 : std::bit_ceil(n); }

// In-place iterative radix-2 FFT. Size must be a power of two. The inverse
// transform includes the 1/n scaling.
inline void fft_inplace(std::span<std::complex<double>> a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || !std::has_single_bit(n)) throw ValidationError("FFT size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles computed directly rather than by recurrence to avoid drift.
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse)
    for (auto& z : a) z /= static_cast<double>(n);
}

}  // namespace chronos
