#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "savnls/grid.hpp"

namespace savnls {

using cplx = std::complex<double>;

/// Nodal values of a real-valued function on a Grid1D.
struct RealField {
  Grid1D grid;
  std::vector<double> v;

  explicit RealField(const Grid1D& g) : grid(g), v(g.size(), 0.0) {}
  RealField(const Grid1D& g, std::vector<double> values) : grid(g), v(std::move(values)) {
    if (static_cast<int>(v.size()) != g.size())
      throw std::invalid_argument("RealField: length does not match grid");
  }

  int size() const { return grid.size(); }
  double& operator[](int a) { return v[a]; }
  double operator[](int a) const { return v[a]; }
};

/// Nodal values of a complex-valued function on a Grid1D.
struct ComplexField {
  Grid1D grid;
  std::vector<cplx> v;

  explicit ComplexField(const Grid1D& g) : grid(g), v(g.size(), cplx{}) {}
  ComplexField(const Grid1D& g, std::vector<cplx> values) : grid(g), v(std::move(values)) {
    if (static_cast<int>(v.size()) != g.size())
      throw std::invalid_argument("ComplexField: length does not match grid");
  }

  int size() const { return grid.size(); }
  cplx& operator[](int a) { return v[a]; }
  const cplx& operator[](int a) const { return v[a]; }
};

/// Fourier coefficients indexed by p in B = {-N/2,...,N/2-1}; storage slot j
/// holds the coefficient of exp(i*k_p*x) with p = j - N/2 (monotone order).
struct SpectralCoeffs {
  Grid1D grid;
  std::vector<cplx> c;

  explicit SpectralCoeffs(const Grid1D& g) : grid(g), c(g.size(), cplx{}) {}
  SpectralCoeffs(const Grid1D& g, std::vector<cplx> coeffs) : grid(g), c(std::move(coeffs)) {
    if (static_cast<int>(c.size()) != g.size())
      throw std::invalid_argument("SpectralCoeffs: length does not match grid");
  }

  int size() const { return grid.size(); }
  cplx& operator[](int j) { return c[j]; }
  const cplx& operator[](int j) const { return c[j]; }
  /// Coefficient for integer mode p (p in B).
  const cplx& at_mode(int p) const { return c[p + grid.size() / 2]; }
};

template <class F>
RealField sample_real(const Grid1D& g, F&& f) {
  RealField out(g);
  for (int a = 0; a < g.size(); ++a) out[a] = f(g.node(a));
  return out;
}

template <class F>
ComplexField sample_complex(const Grid1D& g, F&& f) {
  ComplexField out(g);
  for (int a = 0; a < g.size(); ++a) out[a] = f(g.node(a));
  return out;
}

inline RealField real_part(const ComplexField& u) {
  RealField out(u.grid);
  for (int a = 0; a < u.size(); ++a) out[a] = u[a].real();
  return out;
}

inline RealField imag_part(const ComplexField& u) {
  RealField out(u.grid);
  for (int a = 0; a < u.size(); ++a) out[a] = u[a].imag();
  return out;
}

inline ComplexField combine(const RealField& p, const RealField& q) {
  if (!(p.grid == q.grid)) throw std::invalid_argument("combine: grids differ");
  ComplexField out(p.grid);
  for (int a = 0; a < p.size(); ++a) out[a] = cplx{p[a], q[a]};
  return out;
}

/// Discrete L2 inner product <a,b> = h * sum a_j b_j.
inline double inner(const RealField& a, const RealField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner: grids differ");
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return a.grid.spacing() * s;
}

/// Quadrature L2 norm (exact for trigonometric polynomials on this grid).
inline double l2_norm(const RealField& a) {
  double s = 0.0;
  for (double x : a.v) s += x * x;
  return std::sqrt(a.grid.spacing() * s);
}

inline double l2_norm(const ComplexField& a) {
  double s = 0.0;
  for (const cplx& x : a.v) s += std::norm(x);
  return std::sqrt(a.grid.spacing() * s);
}

inline double linf_norm(const RealField& a) {
  double m = 0.0;
  for (double x : a.v) m = std::max(m, std::abs(x));
  return m;
}

inline double linf_norm(const ComplexField& a) {
  double m = 0.0;
  for (const cplx& x : a.v) m = std::max(m, std::abs(x));
  return m;
}

inline bool all_finite(const RealField& a) {
  return std::all_of(a.v.begin(), a.v.end(), [](double x) { return std::isfinite(x); });
}

inline bool all_finite(const ComplexField& a) {
  return std::all_of(a.v.begin(), a.v.end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

}  // namespace savnls
