#pragma once

#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "savnls/field.hpp"
#include "savnls/model.hpp"
#include "savnls/spectral.hpp"

namespace savnls {

/// Ground-state computation for the cubic Gross-Pitaevskii energy
/// E(phi) = int 1/2 |grad phi|^2 + 1/2 beta phi^4 + V phi^2 on the unit
/// L2 sphere, via the gradient flow phi_t = 1/2 Lap phi - V phi - beta phi^3
/// with discrete normalization, driven by the SAV machinery.
struct GroundStateProblem {
  Grid1D grid;
  RealField potential;
  double beta = 0.0;
  double energy_shift = 1.0;
  double tol = 1e-8;
  long max_steps = 200000;

  GroundStateProblem(const Grid1D& g, RealField v, double interaction, double ec = 1.0,
                     double tolerance = 1e-8, long steps = 200000)
      : grid(g), potential(std::move(v)), beta(interaction), energy_shift(ec), tol(tolerance),
        max_steps(steps) {
    if (!(potential.grid == grid))
      throw std::invalid_argument("GroundStateProblem: potential grid mismatch");
    if (!(energy_shift > 0.0))
      throw std::invalid_argument("GroundStateProblem: energy shift must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("GroundStateProblem: tol must be positive");
  }
};

/// Post-normalization handling of the auxiliary variable. `reset` recomputes
/// r from the normalized iterate (r consistent each step). `carry` keeps r
/// evolving: it extends the SAV update across the normalization substep,
/// r^{k+1} = r^k + <G~, phi^{k+1} - phi^k>, so r tracks sqrt(E1+E_c) along
/// the normalized trajectory and retains whatever drift the extrapolation
/// accumulates. (Rescaling r by the normalization factor instead is
/// dynamically unstable: r decays to zero and the iterate collapses onto the
/// constant mode.)
enum class GsRMode { reset, carry };

struct GsOptions {
  double tau = 1e-2;
  GsRMode r_mode = GsRMode::reset;
  bool predictor_bootstrap = true;
};

/// Non-kinetic part of the energy: int V phi^2 + (beta/2) phi^4.
inline double gs_e1(const RealField& phi, const GroundStateProblem& prob) {
  double acc = 0.0;
  for (int a = 0; a < phi.size(); ++a) {
    const double s = phi[a] * phi[a];
    acc += prob.potential[a] * s + 0.5 * prob.beta * s * s;
  }
  return prob.grid.spacing() * acc;
}

inline double gs_energy(const RealField& phi, const GroundStateProblem& prob) {
  const double sem = h1_seminorm(phi);
  return 0.5 * sem * sem + gs_e1(phi, prob);
}

/// mu(phi) = int 1/2 |grad phi|^2 + beta phi^4 + V phi^2  (= E + beta/2 int phi^4).
inline double chemical_potential(const RealField& phi, const GroundStateProblem& prob) {
  const double sem = h1_seminorm(phi);
  double acc = 0.0;
  for (int a = 0; a < phi.size(); ++a) {
    const double s = phi[a] * phi[a];
    acc += prob.potential[a] * s + prob.beta * s * s;
  }
  return 0.5 * sem * sem + prob.grid.spacing() * acc;
}

/// Modified energy 1/2 |phi|_1^2 + r^2.
inline double gs_modified_energy(const RealField& phi, double r, const GroundStateProblem& prob) {
  (void)prob;
  const double sem = h1_seminorm(phi);
  return 0.5 * sem * sem + r * r;
}

/// Normalized gradient G = (V phi + beta phi^3)/sqrt(gs_e1 + E_c); with a
/// consistent r the force r*G is exactly V phi + beta phi^3.
inline RealField gs_gradient(const RealField& phi, const GroundStateProblem& prob) {
  const double radicand = gs_e1(phi, prob) + prob.energy_shift;
  if (!(radicand > 0.0))
    throw NumericalError("gs_gradient: energy shift too small, E1 + E_c <= 0");
  const double inv_root = 1.0 / std::sqrt(radicand);
  RealField g(phi.grid);
  for (int a = 0; a < phi.size(); ++a)
    g[a] = (prob.potential[a] * phi[a] + prob.beta * phi[a] * phi[a] * phi[a]) * inv_root;
  return g;
}

namespace detail {

// solve [(2/tau) I - 1/2 D2] y = b; every mode divisor 2/tau + k^2/2 is positive
inline RealField gs_shifted_solve(const RealField& b, double tau) {
  SpectralCoeffs c = forward(b);
  for (int j = 0; j < c.size(); ++j) {
    const double k = c.grid.wavenumber(j);
    c[j] /= (2.0 / tau + 0.5 * k * k);
  }
  return inverse_real(c, std::max(l2_norm(b), 1e-300));
}

}  // namespace detail

/// Rolling window of the two latest gradient evaluations, mirroring the
/// dynamics module's extrapolation stencil.
class GsHistory {
 public:
  void push(RealField g, double time) {
    entries_.push_back({std::move(g), time});
    if (entries_.size() > 2) entries_.pop_front();
  }
  int size() const { return static_cast<int>(entries_.size()); }
  const RealField& current() const { return entries_.back().g; }
  const RealField& previous() const { return entries_.front().g; }

  RealField extrapolate() const {
    if (entries_.size() < 2)
      throw std::logic_error("GsHistory: extrapolation needs two evaluations");
    RealField out(current().grid);
    for (int a = 0; a < out.size(); ++a)
      out[a] = 1.5 * current()[a] - 0.5 * previous()[a];
    return out;
  }

 private:
  struct Entry {
    RealField g;
    double time;
  };
  std::deque<Entry> entries_;
};

struct GsStepResult {
  RealField phi;       // normalized iterate
  double r = 0.0;      // post-step auxiliary variable (per r-mode)
  double norm_pre = 0.0;  // ||phi^+||_0 before normalization
};

/// One SAV gradient-flow step with discrete normalization:
/// (phi^+ - phi^k)/tau = 1/2 D2 phi^{k+1/2} - r^{k+1/2} G~,
/// r^+ - r^k = 1/2 <G~, phi^+ - phi^k>, then phi^{k+1} = phi^+/||phi^+||.
inline GsStepResult gs_step(const RealField& phi, double r, const RealField& gtilde,
                            const GroundStateProblem& prob, double tau, GsRMode mode) {
  const Grid1D& g = prob.grid;
  RealField scaled(g);
  for (int a = 0; a < g.size(); ++a) scaled[a] = (2.0 / tau) * phi[a];
  RealField y1 = detail::gs_shifted_solve(scaled, tau);
  RealField neg_g(g);
  for (int a = 0; a < g.size(); ++a) neg_g[a] = -gtilde[a];
  RealField y2 = detail::gs_shifted_solve(neg_g, tau);

  RealField d1(g);
  for (int a = 0; a < g.size(); ++a) d1[a] = y1[a] - phi[a];
  const double denom = 2.0 - inner(gtilde, y2);
  if (std::abs(denom) <= 1e-12)
    throw NumericalError("gs_step: near-singular SAV denominator");
  const double r_mid = (2.0 * r + inner(gtilde, d1)) / denom;

  GsStepResult out{RealField(g), 0.0, 0.0};
  for (int a = 0; a < g.size(); ++a)
    out.phi[a] = 2.0 * (y1[a] + r_mid * y2[a]) - phi[a];
  const double r_plus = 2.0 * r_mid - r;

  out.norm_pre = l2_norm(out.phi);
  if (!(out.norm_pre > 0.0) || !std::isfinite(out.norm_pre))
    throw NumericalError("gs_step: iterate collapsed, ||phi^+|| not positive");
  for (int a = 0; a < g.size(); ++a) out.phi[a] /= out.norm_pre;

  if (mode == GsRMode::reset) {
    out.r = std::sqrt(gs_e1(out.phi, prob) + prob.energy_shift);
  } else {
    (void)r_plus;
    RealField dphi(g);
    for (int a = 0; a < g.size(); ++a) dphi[a] = out.phi[a] - phi[a];
    out.r = r + inner(gtilde, dphi);
  }
  return out;
}

/// History-driven variant: extrapolates G~ at the half step from the two
/// latest gradient evaluations.
inline GsStepResult gs_step(const RealField& phi, double r, const GsHistory& history,
                            const GroundStateProblem& prob, double tau, GsRMode mode) {
  return gs_step(phi, r, history.extrapolate(), prob, tau, mode);
}

struct GroundStateResult {
  RealField phi;
  double energy = 0.0;
  double modified_energy = 0.0;
  double chemical_potential = 0.0;
  double r = 0.0;
  long iterations = 0;
  bool converged = false;
  bool energy_monotone = true;
  std::vector<double> energy_trace;
};

/// Gradient flow with discrete normalization from phi0 until
/// ||phi^{k+1}-phi^k||_0 / tau < tol or max_steps. Energy increase beyond
/// 1e-10 is flagged in the result, not fatal.
inline GroundStateResult solve_ground_state(const GroundStateProblem& prob, const RealField& phi0,
                                            const GsOptions& opt) {
  if (!(opt.tau > 0.0)) throw std::invalid_argument("solve_ground_state: tau must be positive");
  const Grid1D& g = prob.grid;
  const double n0 = l2_norm(phi0);
  if (!(n0 > 0.0)) throw std::invalid_argument("solve_ground_state: phi0 must be nonzero");

  GroundStateResult res{RealField(g), 0.0, 0.0, 0.0, 0.0, 0, false, true, {}};
  for (int a = 0; a < g.size(); ++a) res.phi[a] = phi0[a] / n0;
  res.r = std::sqrt(gs_e1(res.phi, prob) + prob.energy_shift);

  res.energy_trace.reserve(256);
  res.energy_trace.push_back(gs_energy(res.phi, prob));

  GsHistory hist;
  hist.push(gs_gradient(res.phi, prob), 0.0);

  for (long k = 0; k < prob.max_steps; ++k) {
    RealField gtilde(g);
    if (hist.size() < 2) {
      if (opt.predictor_bootstrap) {
        // semi-implicit half step of size tau/2: backward Euler on the
        // Laplacian with frozen g, so [(2/tau) I - 1/2 D2] phi_p = (2/tau) phi - r G
        RealField rhs(g);
        for (int a = 0; a < g.size(); ++a)
          rhs[a] = (2.0 / opt.tau) * res.phi[a] - res.r * hist.current()[a];
        RealField pred = detail::gs_shifted_solve(rhs, opt.tau);
        const double pn = l2_norm(pred);
        for (int a = 0; a < g.size(); ++a) pred[a] /= pn;
        gtilde = gs_gradient(pred, prob);
      } else {
        gtilde = hist.current();
      }
    } else {
      gtilde = hist.extrapolate();
    }

    GsStepResult next = gs_step(res.phi, res.r, gtilde, prob, opt.tau, opt.r_mode);

    double diff2 = 0.0;
    for (int a = 0; a < g.size(); ++a) {
      const double d = next.phi[a] - res.phi[a];
      diff2 += d * d;
    }
    const double increment = std::sqrt(g.spacing() * diff2) / opt.tau;

    res.phi = std::move(next.phi);
    res.r = next.r;
    res.iterations = k + 1;

    const double en = gs_energy(res.phi, prob);
    if (en > res.energy_trace.back() + 1e-10) res.energy_monotone = false;
    if (!std::isfinite(en) || en > res.energy_trace.front() + 1e3)
      throw NumericalError("solve_ground_state: energy diverged at step " + std::to_string(k + 1));
    res.energy_trace.push_back(en);

    hist.push(gs_gradient(res.phi, prob), (k + 1) * opt.tau);

    if (increment < prob.tol) {
      res.converged = true;
      break;
    }
  }

  res.energy = res.energy_trace.back();
  res.modified_energy = gs_modified_energy(res.phi, res.r, prob);
  res.chemical_potential = chemical_potential(res.phi, prob);
  return res;
}

}  // namespace savnls
