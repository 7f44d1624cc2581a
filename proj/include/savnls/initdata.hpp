#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "savnls/field.hpp"
#include "savnls/spectral.hpp"

namespace savnls {

namespace detail {
// once per generator per process; repeated evaluations (e.g. per-step exact
// references) would otherwise flood stderr
inline void warn_soliton_tail(const char* what, double tail) {
  static bool warned_soliton = false, warned_solitary = false;
  bool& flag = (what[0] == 'b') ? warned_soliton : warned_solitary;
  if (flag) return;
  flag = true;
  std::cerr << "[savnls] warning: " << what << " boundary tail " << tail
            << " exceeds 1e-14; the periodic truncation is not negligible\n";
}
inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}
}  // namespace detail

/// Bright soliton u = a/sqrt(-beta) sech(a(x - v t)) exp(i(v x - (v^2-a^2)t/2)).
///
/// This is the closed form with the printed amplitude; it solves the
/// half-Laplacian convention i u_t = -(1/2) u_xx + beta |u|^2 u (the residual
/// tests pin this down). Against i u_t = -u_xx + beta|u|^2 u only the
/// amplitude-sqrt(2) family is exact, so convergence studies that start from
/// this datum measure errors against a fine-step self reference.
inline ComplexField bright_soliton(double a, double beta, double v, double t, const Grid1D& g) {
  if (!(beta < 0.0)) throw std::invalid_argument("bright_soliton: beta must be negative");
  const double amp = a / std::sqrt(-beta);
  ComplexField u(g);
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const double phase = v * x - 0.5 * (v * v - a * a) * t;
    u[j] = amp / std::cosh(a * (x - v * t)) * std::polar(1.0, phase);
  }
  const double tail = std::max(std::abs(u[0]), std::abs(u[g.size() - 1]));
  if (tail > 1e-14) detail::warn_soliton_tail("bright_soliton", tail);
  return u;
}

/// Solitary wave u = sqrt(2) e^{it} / cosh(x); exact for i u_t = -u_xx - |u|^2 u.
inline ComplexField solitary_wave(double t, const Grid1D& g) {
  ComplexField u(g);
  const cplx phase = std::polar(std::sqrt(2.0), t);
  for (int j = 0; j < g.size(); ++j) u[j] = phase / std::cosh(g.node(j));
  const double tail = std::max(std::abs(u[0]), std::abs(u[g.size() - 1]));
  if (tail > 1e-14) detail::warn_soliton_tail("solitary_wave", tail);
  return u;
}

/// Plane wave A exp(i k x) with k = pi * mode_index / L.
inline ComplexField plane_wave(double amplitude, int mode_index, const Grid1D& g) {
  if (mode_index < -g.size() / 2 || mode_index >= g.size() / 2)
    throw std::invalid_argument("plane_wave: mode index outside B");
  ComplexField u(g);
  const double k = std::numbers::pi * mode_index / g.half_length();
  for (int j = 0; j < g.size(); ++j) u[j] = std::polar(amplitude, k * g.node(j));
  return u;
}

inline ComplexField sine_wave(const Grid1D& g) {
  return sample_complex(g, [](double x) { return cplx{std::sin(x), 0.0}; });
}

/// Random data with prescribed Sobolev regularity: Fourier-multiplier
/// smoothing of uniform noise, xi_p (1+k_p^2)^(-(alpha+1/2)/2) with xi
/// uniform on [-1,1]^2, seeded, then normalized to unit L2 norm. The extra
/// 1/2 in the exponent puts the field at the H^alpha borderline; a plain
/// alpha exponent would leave it half an order rougher than labeled, which
/// shows up directly in the measured energy-error orders. Same
/// (alpha, seed, N) reproduces the field bit for bit.
inline ComplexField h_alpha_random(double alpha, std::uint64_t seed, const Grid1D& g) {
  if (!(alpha > 0.0)) throw std::invalid_argument("h_alpha_random: alpha must be positive");
  std::mt19937_64 rng(seed);
  SpectralCoeffs c(g);
  for (int j = 0; j < g.size(); ++j) {
    const double re = detail::uniform_pm1(rng);
    const double im = detail::uniform_pm1(rng);
    const double k = g.wavenumber(j);
    c[j] = cplx{re, im} * std::pow(1.0 + k * k, -0.5 * (alpha + 0.5));
  }
  ComplexField u = inverse(c);
  const double norm = l2_norm(u);
  for (int j = 0; j < g.size(); ++j) u[j] /= norm;
  return u;
}

/// Reads a two-column (Re, Im) CSV of length N; separators are commas or
/// whitespace, lines starting with '#' are skipped.
inline ComplexField read_field_csv(const std::string& path, const Grid1D& g) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_field_csv: cannot open " + path);
  ComplexField u(g);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    double re = 0.0, im = 0.0;
    if (!(ss >> re)) continue;
    ss >> im;
    if (row >= g.size()) throw std::invalid_argument("read_field_csv: more rows than grid points");
    u[row++] = cplx{re, im};
  }
  if (row != g.size())
    throw std::invalid_argument("read_field_csv: expected " + std::to_string(g.size()) +
                                " rows, got " + std::to_string(row));
  if (!all_finite(u)) throw std::invalid_argument("read_field_csv: non-finite entries");
  return u;
}

}  // namespace savnls
