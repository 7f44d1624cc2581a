#pragma once

#include <cmath>
#include <complex>

#include "savnls/model.hpp"
#include "savnls/spectral.hpp"

namespace savnls {

enum class SplitOrder { lie, strang };

struct SplitScheme {
  SplitOrder order = SplitOrder::strang;
  double tau = 0.0;

  SplitScheme(SplitOrder o, double step) : order(o), tau(step) {
    if (!(tau > 0.0)) throw std::invalid_argument("SplitScheme: tau must be positive");
  }
};

/// Exact flow of i u_t = -Lap u over dt: multiply mode p by exp(-i k_p^2 dt).
inline ComplexField linear_flow(const ComplexField& u, double dt) {
  if (dt == 0.0) return u;
  SpectralCoeffs c = forward(u);
  for (int j = 0; j < c.size(); ++j) {
    const double k = c.grid.wavenumber(j);
    c[j] *= std::polar(1.0, -k * k * dt);
  }
  return inverse(c);
}

/// Exact pointwise flow of i u_t = V u + f(|u|^2) u over dt; |u| is invariant
/// so the solution is a pure phase.
inline ComplexField nonlinear_flow(const ComplexField& u, double dt, const NlsProblem& prob) {
  if (!(u.grid == prob.grid)) throw std::invalid_argument("nonlinear_flow: grid mismatch");
  if (dt == 0.0) return u;
  ComplexField out(u.grid);
  for (int a = 0; a < u.size(); ++a) {
    const double phase = -(prob.potential[a] + prob.nonlinearity.f(std::norm(u[a]))) * dt;
    out[a] = u[a] * std::polar(1.0, phase);
  }
  return out;
}

/// One splitting step. Lie: nonlinear(tau) after linear(tau). Strang:
/// linear(tau/2), nonlinear(tau), linear(tau/2).
inline ComplexField split_step(const ComplexField& u, const SplitScheme& scheme,
                               const NlsProblem& prob) {
  if (scheme.order == SplitOrder::lie)
    return nonlinear_flow(linear_flow(u, scheme.tau), scheme.tau, prob);
  ComplexField w = linear_flow(u, 0.5 * scheme.tau);
  w = nonlinear_flow(w, scheme.tau, prob);
  return linear_flow(w, 0.5 * scheme.tau);
}

/// Signed-step variant used by the symmetry checks.
inline ComplexField split_step_signed(const ComplexField& u, SplitOrder order, double dt,
                                      const NlsProblem& prob) {
  if (order == SplitOrder::lie)
    return nonlinear_flow(linear_flow(u, dt), dt, prob);
  ComplexField w = linear_flow(u, 0.5 * dt);
  w = nonlinear_flow(w, dt, prob);
  return linear_flow(w, 0.5 * dt);
}

}  // namespace savnls
