#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace savnls::detail {

/// Minimal row-major dense matrix used only by test oracles and the
/// dense_reference solver path; never in the FFT hot path.
struct DenseMatrix {
  int n = 0;
  std::vector<double> a;

  explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += at(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }
};

/// Gaussian elimination with partial pivoting; solves A x = b in place.
inline std::vector<double> lu_solve(DenseMatrix m, std::vector<double> b) {
  const int n = m.n;
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("lu_solve: size mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m.at(r, col)) > std::abs(m.at(piv, col))) piv = r;
    if (m.at(piv, col) == 0.0) throw std::runtime_error("lu_solve: singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
      std::swap(b[piv], b[col]);
    }
    const double inv = 1.0 / m.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = m.at(r, col) * inv;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= m.at(i, j) * x[j];
    x[i] = s / m.at(i, i);
  }
  return x;
}

}  // namespace savnls::detail
