#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "savnls/dense.hpp"
#include "savnls/fft.hpp"
#include "savnls/field.hpp"
#include "savnls/grid.hpp"

namespace savnls {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Forward transform with the 1/N normalization: the coefficient stored for
/// mode p equals (1/N) sum_b U(x_b) exp(-i k_p x_b), so a pure plane wave
/// A*exp(i k_p x) maps to a single coefficient A. Relative to the 0-based DFT
/// this is a (-1)^p twiddle from the node offset x_0 = -L plus the reorder
/// into monotone mode order.
inline SpectralCoeffs forward(const ComplexField& u) {
  const int n = u.size();
  std::vector<cplx> work(u.v);
  detail::dft(work, false);
  SpectralCoeffs out(u.grid);
  const double inv_n = 1.0 / n;
  for (int j = 0; j < n; ++j) {
    const int p = u.grid.mode(j);
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    out[j] = sign * inv_n * work[(j + n / 2) % n];
  }
  return out;
}

inline SpectralCoeffs forward(const RealField& u) {
  ComplexField tmp(u.grid);
  for (int a = 0; a < u.size(); ++a) tmp[a] = cplx{u[a], 0.0};
  return forward(tmp);
}

/// Exact inverse of forward (up to roundoff): U(x_a) = sum_p c_p exp(i k_p x_a).
inline ComplexField inverse(const SpectralCoeffs& c) {
  const int n = c.size();
  std::vector<cplx> work(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int p = c.grid.mode(j);
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    work[(j + n / 2) % n] = sign * c[j];
  }
  detail::dft(work, true);
  return ComplexField(c.grid, std::move(work));
}

/// Inverse transform of coefficients known to represent a real field. The
/// imaginary residue is discarded after checking it against a roundoff
/// allowance scaled by `scale` (callers pass the field norm times the
/// conditioning of the operator they applied in coefficient space).
inline RealField inverse_real(const SpectralCoeffs& c, double scale) {
  ComplexField u = inverse(c);
  double imax = 0.0;
  for (const cplx& x : u.v) imax = std::max(imax, std::abs(x.imag()));
  if (imax > 1e-12 * scale)
    throw NumericalError("inverse_real: imaginary residue " + std::to_string(imax) +
                         " exceeds roundoff allowance");
  return real_part(u);
}

/// Spectral Laplacian: multiply mode p by -k_p^2 and transform back.
inline ComplexField laplacian(const ComplexField& u) {
  if (!all_finite(u)) throw NumericalError("laplacian: non-finite input");
  SpectralCoeffs c = forward(u);
  for (int j = 0; j < c.size(); ++j) {
    const double k = c.grid.wavenumber(j);
    c[j] *= -k * k;
  }
  return inverse(c);
}

inline RealField laplacian(const RealField& u) {
  if (!all_finite(u)) throw NumericalError("laplacian: non-finite input");
  SpectralCoeffs c = forward(u);
  double kmax = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const double k = c.grid.wavenumber(j);
    kmax = std::max(kmax, std::abs(k));
    c[j] *= -k * k;
  }
  return inverse_real(c, (1.0 + kmax * kmax) * std::max(l2_norm(u), 1e-300));
}

/// Dense Fourier second-derivative matrix, test oracle for `laplacian`.
///
/// Entries are the nodal matrix of the -k^2 multiplier over the mode set B.
/// The closed form for [-pi,pi] has off-diagonal (-1)^(j+l+1)/(2 sin^2((j-l)pi/N))
/// and diagonal -(N-1)(N-2)/12 - N/4; general half-length L scales everything
/// by (pi/L)^2. Only even N is supported.
inline detail::DenseMatrix dense_d2(const Grid1D& g) {
  const int n = g.size();
  if (n % 2 != 0) throw std::invalid_argument("dense_d2: even N required");
  const double scale = std::pow(std::numbers::pi / g.half_length(), 2);
  const double diag = -(static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 2.0) / 12.0 -
                      static_cast<double>(n) / 4.0;
  detail::DenseMatrix m(n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (j == l) {
        m.at(j, l) = scale * diag;
      } else {
        const double s = std::sin((j - l) * std::numbers::pi / n);
        const double sign = ((j + l) % 2 == 0) ? -1.0 : 1.0;
        m.at(j, l) = scale * sign / (2.0 * s * s);
      }
    }
  }
  return m;
}

/// Sobolev norm (2L * sum_p (1+k_p^2)^s |c_p|^2)^(1/2); s = 0 recovers the
/// quadrature L2 norm via Parseval.
inline double sobolev_norm(const SpectralCoeffs& c, double s) {
  double acc = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const double k = c.grid.wavenumber(j);
    acc += std::pow(1.0 + k * k, s) * std::norm(c[j]);
  }
  return std::sqrt(2.0 * c.grid.half_length() * acc);
}

inline double sobolev_norm(const ComplexField& u, double s) { return sobolev_norm(forward(u), s); }
inline double sobolev_norm(const RealField& u, double s) { return sobolev_norm(forward(u), s); }

/// H1 seminorm |u|_1 = ||grad u||_0, computed as (2L sum k_p^2 |c_p|^2)^(1/2).
inline double h1_seminorm(const SpectralCoeffs& c) {
  double acc = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const double k = c.grid.wavenumber(j);
    acc += k * k * std::norm(c[j]);
  }
  return std::sqrt(2.0 * c.grid.half_length() * acc);
}

inline double h1_seminorm(const RealField& u) { return h1_seminorm(forward(u)); }
inline double h1_seminorm(const ComplexField& u) { return h1_seminorm(forward(u)); }

/// Trigonometric interpolation onto a finer grid by zero-padding the mode set.
inline ComplexField interpolate(const ComplexField& u, const Grid1D& fine) {
  if (fine.size() < u.size() || fine.half_length() != u.grid.half_length())
    throw std::invalid_argument("interpolate: target grid must refine the source domain");
  SpectralCoeffs c = forward(u);
  SpectralCoeffs padded(fine);
  const int off = fine.size() / 2 - u.size() / 2;
  for (int j = 0; j < u.size(); ++j) padded[j + off] = c[j];
  return inverse(padded);
}

/// Restriction to a coarser grid whose nodes nest in this one (N multiple).
inline ComplexField restrict_to(const ComplexField& u, const Grid1D& coarse) {
  if (u.size() % coarse.size() != 0 || coarse.half_length() != u.grid.half_length())
    throw std::invalid_argument("restrict_to: grids do not nest");
  const int stride = u.size() / coarse.size();
  ComplexField out(coarse);
  for (int a = 0; a < coarse.size(); ++a) out[a] = u[a * stride];
  return out;
}

}  // namespace savnls
