#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace savnls::detail {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddle factors exp(-2*pi*i*k/n), k < n/2, shared across calls for a given n.
inline std::shared_ptr<const std::vector<cplx>> twiddle_table(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const std::vector<cplx>>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<std::vector<cplx>>(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    (*table)[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(n));
  cache.emplace(n, table);
  return table;
}

// In-place iterative radix-2 transform, unnormalized, sign -1 (forward DFT
// convention X_k = sum_a x_a exp(-2*pi*i*a*k/n)). n must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  auto tw = twiddle_table(n);
  const auto& w = *tw;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx t = inverse ? std::conj(w[k * stride]) : w[k * stride];
        t *= a[i + k + len / 2];
        a[i + k + len / 2] = a[i + k] - t;
        a[i + k] += t;
      }
    }
  }
}

// Bluestein chirp-z fallback for arbitrary n (used for even non-power-of-two
// sizes). Exponents are reduced mod 2n before forming the chirp to keep the
// phase accurate for large n.
inline void fft_bluestein(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = std::polar(1.0, inverse ? ang : -ang);
  }

  std::vector<cplx> x(m, cplx{0.0, 0.0}), y(m, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    y[m - k] = std::conj(chirp[k]);
  }
  fft_pow2(x, false);
  fft_pow2(y, false);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * scale * chirp[k];
}

/// Unnormalized DFT: X_k = sum_a x_a exp(-+2*pi*i*a*k/n). The inverse flag
/// flips the sign of the exponent; no 1/n factor is applied either way.
inline void dft(std::vector<cplx>& a, bool inverse) {
  if (a.empty()) return;
  if (is_power_of_two(a.size()))
    fft_pow2(a, inverse);
  else
    fft_bluestein(a, inverse);
}

}  // namespace savnls::detail
