#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "savnls/field.hpp"
#include "savnls/spectral.hpp"

namespace savnls {

enum class NonlinearityKind { none, cubic, power, custom };

/// Density nonlinearity f(s) with primitive F (F' = f), evaluated at
/// s = |u|^2 = p^2 + q^2. The cubic case is f(s) = beta*s; the power case is
/// f(s) = beta*s^(2/gamma) with F(s) = beta*gamma/(2+gamma) * s^((2+gamma)/gamma),
/// matching a Hamiltonian density beta*gamma/(4+2*gamma) |u|^(4/gamma+2).
class Nonlinearity {
 public:
  static Nonlinearity none() { return Nonlinearity(NonlinearityKind::none, 0.0, 0.0); }
  static Nonlinearity cubic(double beta) { return Nonlinearity(NonlinearityKind::cubic, beta, 0.0); }
  static Nonlinearity power(double beta, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("Nonlinearity::power: gamma must be positive");
    return Nonlinearity(NonlinearityKind::power, beta, gamma);
  }
  static Nonlinearity custom(std::function<double(double)> f, std::function<double(double)> big_f) {
    Nonlinearity n(NonlinearityKind::custom, 0.0, 0.0);
    n.f_ = std::move(f);
    n.big_f_ = std::move(big_f);
    return n;
  }

  double f(double s) const {
    switch (kind_) {
      case NonlinearityKind::none: return 0.0;
      case NonlinearityKind::cubic: return beta_ * s;
      case NonlinearityKind::power: return beta_ * std::pow(s, 2.0 / gamma_);
      case NonlinearityKind::custom: return f_(s);
    }
    return 0.0;
  }

  double F(double s) const {
    switch (kind_) {
      case NonlinearityKind::none: return 0.0;
      case NonlinearityKind::cubic: return 0.5 * beta_ * s * s;
      case NonlinearityKind::power:
        return beta_ * gamma_ / (2.0 + gamma_) * std::pow(s, (2.0 + gamma_) / gamma_);
      case NonlinearityKind::custom: return big_f_(s);
    }
    return 0.0;
  }

  NonlinearityKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

 private:
  Nonlinearity(NonlinearityKind k, double beta, double gamma) : kind_(k), beta_(beta), gamma_(gamma) {}
  NonlinearityKind kind_;
  double beta_;
  double gamma_;
  std::function<double(double)> f_;
  std::function<double(double)> big_f_;
};

/// Everything defining the continuous problem i u_t = -Lap u + V u + f(|u|^2) u:
/// sampled potential, nonlinearity, and the positive shift E_c that keeps the
/// auxiliary-variable radicand E1 + E_c positive.
struct NlsProblem {
  Grid1D grid;
  RealField potential;
  Nonlinearity nonlinearity;
  double energy_shift = 1.0;
  bool adapt_shift = false;

  NlsProblem(const Grid1D& g, RealField v, Nonlinearity nl, double ec = 1.0, bool adapt = false)
      : grid(g), potential(std::move(v)), nonlinearity(std::move(nl)), energy_shift(ec),
        adapt_shift(adapt) {
    if (!(potential.grid == grid))
      throw std::invalid_argument("NlsProblem: potential grid mismatch");
    if (!all_finite(potential))
      throw std::invalid_argument("NlsProblem: potential has non-finite entries");
    if (!(energy_shift > 0.0))
      throw std::invalid_argument("NlsProblem: energy shift must be positive");
  }
};

inline NlsProblem free_problem(const Grid1D& g, double ec = 1.0) {
  return NlsProblem(g, RealField(g), Nonlinearity::none(), ec);
}

inline RealField harmonic_potential(const Grid1D& g) {
  return sample_real(g, [](double x) { return 0.5 * x * x; });
}

/// Unknowns of the fully discrete SAV scheme: nodal real/imaginary parts and
/// the scalar auxiliary variable r.
struct SavState {
  RealField p;
  RealField q;
  double r = 0.0;
  double time = 0.0;
};

/// Nonlinear-plus-potential energy E1 = 1/2 int V (p^2+q^2) + F(p^2+q^2).
inline double e1(const RealField& p, const RealField& q, const NlsProblem& prob) {
  if (!(p.grid == prob.grid) || !(q.grid == prob.grid))
    throw std::invalid_argument("e1: field grid mismatch");
  double acc = 0.0;
  for (int a = 0; a < p.size(); ++a) {
    const double s = p[a] * p[a] + q[a] * q[a];
    acc += prob.potential[a] * s + prob.nonlinearity.F(s);
  }
  const double result = 0.5 * prob.grid.spacing() * acc;
  if (!std::isfinite(result)) throw NumericalError("e1: non-finite energy");
  return result;
}

inline double e1(const ComplexField& u, const NlsProblem& prob) {
  return e1(real_part(u), imag_part(u), prob);
}

/// Normalized variational derivatives of E1:
/// G1 = (V q + f(p^2+q^2) q)/sqrt(E1+E_c), G2 = the same with p.
inline std::pair<RealField, RealField> g_pair(const RealField& p, const RealField& q,
                                              const NlsProblem& prob) {
  const double radicand = e1(p, q, prob) + prob.energy_shift;
  if (!(radicand > 0.0))
    throw NumericalError("g_pair: energy shift too small, E1 + E_c <= 0");
  const double inv_root = 1.0 / std::sqrt(radicand);
  RealField g1(p.grid), g2(p.grid);
  for (int a = 0; a < p.size(); ++a) {
    const double w = (prob.potential[a] + prob.nonlinearity.f(p[a] * p[a] + q[a] * q[a])) * inv_root;
    g1[a] = w * q[a];
    g2[a] = w * p[a];
  }
  return {std::move(g1), std::move(g2)};
}

/// Exact Hamiltonian H = 1/2 int |grad p|^2 + |grad q|^2 + V(p^2+q^2) + F.
inline double hamiltonian(const RealField& p, const RealField& q, const NlsProblem& prob) {
  const double sp = h1_seminorm(p);
  const double sq = h1_seminorm(q);
  return 0.5 * (sp * sp + sq * sq) + e1(p, q, prob);
}

inline double hamiltonian(const ComplexField& u, const NlsProblem& prob) {
  return hamiltonian(real_part(u), imag_part(u), prob);
}

/// Modified Hamiltonian H~ = 1/2 (|Q|_1^2 + |P|_1^2) + r^2, the quantity the
/// discrete scheme conserves exactly.
inline double modified_hamiltonian(const SavState& st) {
  const double sp = h1_seminorm(st.p);
  const double sq = h1_seminorm(st.q);
  return 0.5 * (sp * sp + sq * sq) + st.r * st.r;
}

/// Mass ||P||_0^2 + ||Q||_0^2.
inline double mass(const RealField& p, const RealField& q) {
  const double np = l2_norm(p);
  const double nq = l2_norm(q);
  return np * np + nq * nq;
}

inline double mass(const ComplexField& u) {
  const double n = l2_norm(u);
  return n * n;
}

}  // namespace savnls
