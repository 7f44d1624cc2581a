#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace savnls {

/// Uniform periodic collocation grid on [-L, L).
///
/// Nodes are x_a = -L + a*h with h = 2L/N, a = 0..N-1. The associated
/// Fourier mode set is B = {-N/2, ..., N/2-1} with physical wavenumbers
/// k_p = pi*p/L, so that exp(i*k_p*x) is exactly representable. N must be
/// even; the mode set and the closed-form differentiation matrix used as a
/// cross-check are only defined for even N.
class Grid1D {
 public:
  Grid1D(int num_points, double half_length) : n_(num_points), l_(half_length) {
    if (n_ < 4 || n_ % 2 != 0)
      throw std::invalid_argument("Grid1D: num_points must be even and >= 4");
    if (!(l_ > 0.0) || !std::isfinite(l_))
      throw std::invalid_argument("Grid1D: half_length must be positive and finite");
  }

  int size() const { return n_; }
  double half_length() const { return l_; }
  double spacing() const { return 2.0 * l_ / n_; }

  /// Node position x_a, a = 0..N-1.
  double node(int a) const { return -l_ + a * spacing(); }

  /// Integer mode index p = j - N/2 for storage slot j (monotone in p).
  int mode(int j) const { return j - n_ / 2; }

  /// Physical wavenumber k_p = pi*p/L for storage slot j.
  double wavenumber(int j) const {
    return std::numbers::pi * static_cast<double>(mode(j)) / l_;
  }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (int a = 0; a < n_; ++a) x[a] = node(a);
    return x;
  }

  bool operator==(const Grid1D&) const = default;

 private:
  int n_;
  double l_;
};

}  // namespace savnls
