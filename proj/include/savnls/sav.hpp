#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "savnls/dense.hpp"
#include "savnls/model.hpp"
#include "savnls/spectral.hpp"
#include "savnls/splitting.hpp"

namespace savnls {

enum class SavAlgorithm { alg1, alg2 };
enum class ShiftedSolver { fourier_diagonal, dense_reference };
enum class Bootstrap { predictor, frozen };

struct StepperConfig {
  double tau = 0.0;
  SavAlgorithm algorithm = SavAlgorithm::alg2;
  ShiftedSolver solver = ShiftedSolver::fourier_diagonal;
  Bootstrap bootstrap = Bootstrap::predictor;
  double max_residual = 1e-11;  // dense path only

  StepperConfig(double step, SavAlgorithm alg = SavAlgorithm::alg2,
                ShiftedSolver sv = ShiftedSolver::fourier_diagonal,
                Bootstrap bs = Bootstrap::predictor)
      : tau(step), algorithm(alg), solver(sv), bootstrap(bs) {
    if (!(tau > 0.0)) throw std::invalid_argument("StepperConfig: tau must be positive");
  }
};

/// One evaluation of the SAV gradient pair (G1, G2).
struct GPair {
  RealField g1;
  RealField g2;
};

/// Rolling window of the two most recent g evaluations; the extrapolation
/// stencil for the half step lives on top of it.
class GHistory {
 public:
  void push(GPair g, double time) {
    entries_.push_back({std::move(g), time});
    if (entries_.size() > 2) entries_.pop_front();
  }
  int size() const { return static_cast<int>(entries_.size()); }
  const GPair& current() const { return entries_.back().g; }
  const GPair& previous() const { return entries_.front().g; }
  double current_time() const { return entries_.back().time; }
  double previous_time() const { return entries_.front().time; }
  void clear() { entries_.clear(); }

 private:
  struct Entry {
    GPair g;
    double time;
  };
  std::deque<Entry> entries_;
};

/// Second-order extrapolation of g at t^{k+1/2}: (3 G^k - G^{k-1})/2, exact
/// for g linear in time.
inline GPair extrapolate_g(const GHistory& h) {
  if (h.size() < 2)
    throw std::logic_error("extrapolate_g: history not populated (bootstrap required)");
  const GPair& cur = h.current();
  const GPair& prev = h.previous();
  GPair out{RealField(cur.g1.grid), RealField(cur.g1.grid)};
  for (int a = 0; a < cur.g1.size(); ++a) {
    out.g1[a] = 1.5 * cur.g1[a] - 0.5 * prev.g1[a];
    out.g2[a] = 1.5 * cur.g2[a] - 0.5 * prev.g2[a];
  }
  return out;
}

/// Raises the energy shift once at initialization when E1 + E_c <= 0 and the
/// problem opted into adaptation; conservation tests need the shift fixed, so
/// nothing is adapted mid-run.
inline NlsProblem prepared_problem(const ComplexField& u0, NlsProblem prob) {
  const double en = e1(u0, prob);
  if (en + prob.energy_shift <= 0.0) {
    if (!prob.adapt_shift)
      throw NumericalError("energy shift too small: E1 + E_c <= 0 at initialization");
    prob.energy_shift = std::abs(en) + 1.0;
  }
  return prob;
}

/// P = Re(u0), Q = Im(u0), r = sqrt(E1 + E_c), t = 0.
inline SavState init_state(const ComplexField& u0, const NlsProblem& prob) {
  if (!all_finite(u0)) throw NumericalError("init_state: non-finite initial data");
  RealField p = real_part(u0), q = imag_part(u0);
  const double radicand = e1(p, q, prob) + prob.energy_shift;
  if (!(radicand > 0.0))
    throw NumericalError("init_state: energy shift too small, E1 + E_c <= 0");
  return SavState{std::move(p), std::move(q), std::sqrt(radicand), 0.0};
}

namespace detail {

// <(G2,G1), (Zp,Zq)> -- the pairing vector of the matrix form
inline double pair_g(const GPair& g, const RealField& zp, const RealField& zq) {
  return inner(g.g2, zp) + inner(g.g1, zq);
}

// Per-mode 2x2 solve of [(2/tau) I + J] z = b in coefficient space; blocks are
// [[2/tau, lambda], [-lambda, 2/tau]] with lambda = -k^2.
inline void shifted_inverse_modes(SpectralCoeffs& bp, SpectralCoeffs& bq, double tau) {
  const double d = 2.0 / tau;
  for (int j = 0; j < bp.size(); ++j) {
    const double k = bp.grid.wavenumber(j);
    const double lam = -k * k;
    const double det = d * d + lam * lam;
    const cplx zp = (d * bp[j] - lam * bq[j]) / det;
    const cplx zq = (lam * bp[j] + d * bq[j]) / det;
    bp[j] = zp;
    bq[j] = zq;
  }
}

// A^{ -1 } with A = I + (tau/2) J: blocks [[1, (tau/2) lambda], [-(tau/2) lambda, 1]].
inline void a_inverse_modes(SpectralCoeffs& bp, SpectralCoeffs& bq, double tau) {
  for (int j = 0; j < bp.size(); ++j) {
    const double k = bp.grid.wavenumber(j);
    const double c = -0.5 * tau * k * k;  // (tau/2) * lambda
    const double det = 1.0 + c * c;
    const cplx zp = (bp[j] - c * bq[j]) / det;
    const cplx zq = (c * bp[j] + bq[j]) / det;
    bp[j] = zp;
    bq[j] = zq;
  }
}

// forward action of I - (tau/2) J
inline void a_mirror_modes(SpectralCoeffs& bp, SpectralCoeffs& bq, double tau) {
  for (int j = 0; j < bp.size(); ++j) {
    const double k = bp.grid.wavenumber(j);
    const double c = -0.5 * tau * k * k;
    const cplx zp = bp[j] - c * bq[j];
    const cplx zq = c * bp[j] + bq[j];
    bp[j] = zp;
    bq[j] = zq;
  }
}

inline double internal_scale(const RealField& a, const RealField& b, double tau) {
  const Grid1D& g = a.grid;
  const double kmax = std::numbers::pi * (g.size() / 2) / g.half_length();
  return (1.0 + std::abs(tau) * kmax * kmax) * std::max({l2_norm(a), l2_norm(b), 1e-300});
}

// dense 2N x 2N assembly of [[d I, D2], [-D2, d I]]
inline DenseMatrix block_shifted_matrix(const Grid1D& g, double d) {
  const int n = g.size();
  DenseMatrix d2 = dense_d2(g);
  DenseMatrix m(2 * n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = d;
    m.at(n + i, n + i) = d;
    for (int j = 0; j < n; ++j) {
      m.at(i, n + j) = d2.at(i, j);
      m.at(n + i, j) = -d2.at(i, j);
    }
  }
  return m;
}

inline std::pair<RealField, RealField> dense_block_solve(const DenseMatrix& m, const RealField& bp,
                                                         const RealField& bq,
                                                         double max_residual = 1e-11) {
  const int n = bp.size();
  std::vector<double> rhs(2 * n);
  for (int a = 0; a < n; ++a) {
    rhs[a] = bp[a];
    rhs[n + a] = bq[a];
  }
  std::vector<double> sol = lu_solve(m, rhs);
  std::vector<double> check = m.apply(sol);
  double resid = 0.0, scale = 1.0;
  for (int a = 0; a < 2 * n; ++a) {
    resid = std::max(resid, std::abs(check[a] - rhs[a]));
    scale = std::max(scale, std::abs(rhs[a]));
  }
  if (resid > max_residual * scale)
    throw NumericalError("dense_block_solve: residual " + std::to_string(resid) +
                         " exceeds tolerance");
  RealField zp(bp.grid), zq(bp.grid);
  for (int a = 0; a < n; ++a) {
    zp[a] = sol[a];
    zq[a] = sol[n + a];
  }
  return {std::move(zp), std::move(zq)};
}

}  // namespace detail

/// Solves [(2/tau) I + J] z = b with J = [[0, D2], [-D2, 0]]. The Fourier path
/// solves one 2x2 block per wavenumber; each block has determinant
/// (2/tau)^2 + k^4 > 0, so no mode can be singular.
inline std::pair<RealField, RealField> solve_shifted(const RealField& bp, const RealField& bq,
                                                     double tau,
                                                     ShiftedSolver solver = ShiftedSolver::fourier_diagonal) {
  if (!(bp.grid == bq.grid)) throw std::invalid_argument("solve_shifted: grids differ");
  if (solver == ShiftedSolver::dense_reference) {
    auto m = detail::block_shifted_matrix(bp.grid, 2.0 / tau);
    return detail::dense_block_solve(m, bp, bq);
  }
  SpectralCoeffs cp = forward(bp), cq = forward(bq);
  detail::shifted_inverse_modes(cp, cq, tau);
  const double scale = detail::internal_scale(bp, bq, tau);
  return {inverse_real(cp, scale), inverse_real(cq, scale)};
}

/// One Crank-Nicolson SAV step with a prescribed extrapolated pair G~. Both
/// algorithms solve the same linear system exactly; dt may be signed (the
/// frozen-G~ reversibility checks step backwards).
inline SavState sav_step(const SavState& st, const GPair& gt, const NlsProblem& prob,
                         const StepperConfig& cfg, double dt) {
  const Grid1D& g = prob.grid;
  RealField bt_p(g), bt_q(g);  // B~ = (-G1, G2)
  for (int a = 0; a < g.size(); ++a) {
    bt_p[a] = -gt.g1[a];
    bt_q[a] = gt.g2[a];
  }

  SavState next{RealField(g), RealField(g), 0.0, st.time + dt};

  if (cfg.algorithm == SavAlgorithm::alg1) {
    // C^k = (I - dt/2 J) Z^k - dt (r^k - (1/4) <G~,Z^k>) B~, then the
    // Sherman-Morrison style scalar solve for <G~, Z^{k+1}>.
    const double gz = detail::pair_g(gt, st.p, st.q);
    const double bcoef = -dt * st.r + 0.25 * dt * gz;
    RealField wc_p(g), wc_q(g), wb_p(g), wb_q(g);
    if (cfg.solver == ShiftedSolver::fourier_diagonal) {
      SpectralCoeffs cp = forward(st.p), cq = forward(st.q);
      detail::a_mirror_modes(cp, cq, dt);
      SpectralCoeffs bp = forward(bt_p), bq = forward(bt_q);
      for (int j = 0; j < g.size(); ++j) {
        cp[j] += bcoef * bp[j];
        cq[j] += bcoef * bq[j];
      }
      detail::a_inverse_modes(cp, cq, dt);
      detail::a_inverse_modes(bp, bq, dt);
      const double scale = detail::internal_scale(st.p, st.q, dt) +
                           detail::internal_scale(bt_p, bt_q, dt);
      wc_p = inverse_real(cp, scale);
      wc_q = inverse_real(cq, scale);
      wb_p = inverse_real(bp, scale);
      wb_q = inverse_real(bq, scale);
    } else {
      // dense reference path (Sherman-Morrison with LU-backed A^{-1})
      auto d2 = dense_d2(g);
      const int n = g.size();
      detail::DenseMatrix amat(2 * n);
      for (int i = 0; i < n; ++i) {
        amat.at(i, i) = 1.0;
        amat.at(n + i, n + i) = 1.0;
        for (int j = 0; j < n; ++j) {
          amat.at(i, n + j) = 0.5 * dt * d2.at(i, j);
          amat.at(n + i, j) = -0.5 * dt * d2.at(i, j);
        }
      }
      std::vector<double> cvec(2 * n), bvec(2 * n);
      for (int a = 0; a < n; ++a) {
        double d2p = 0.0, d2q = 0.0;
        for (int j = 0; j < n; ++j) {
          d2p += d2.at(a, j) * st.p[j];
          d2q += d2.at(a, j) * st.q[j];
        }
        cvec[a] = st.p[a] - 0.5 * dt * d2q + bcoef * bt_p[a];
        cvec[n + a] = st.q[a] + 0.5 * dt * d2p + bcoef * bt_q[a];
        bvec[a] = bt_p[a];
        bvec[n + a] = bt_q[a];
      }
      auto wc = detail::lu_solve(amat, cvec);
      auto wb = detail::lu_solve(amat, bvec);
      for (int a = 0; a < n; ++a) {
        wc_p[a] = wc[a];
        wc_q[a] = wc[n + a];
        wb_p[a] = wb[a];
        wb_q[a] = wb[n + a];
      }
    }
    const double denom = 1.0 + 0.25 * dt * detail::pair_g(gt, wb_p, wb_q);
    if (std::abs(denom) <= 1e-12)
      throw NumericalError("sav_step(alg1): near-singular SAV denominator " +
                           std::to_string(denom));
    const double s = detail::pair_g(gt, wc_p, wc_q) / denom;
    for (int a = 0; a < g.size(); ++a) {
      next.p[a] = wc_p[a] - 0.25 * dt * s * wb_p[a];
      next.q[a] = wc_q[a] - 0.25 * dt * s * wb_q[a];
    }
  } else {
    // Algorithm 2: decoupled shifted solves plus the scalar midpoint r.
    RealField z1_p(g), z1_q(g), z2_p(g), z2_q(g);
    const double d = 2.0 / dt;
    if (cfg.solver == ShiftedSolver::fourier_diagonal) {
      SpectralCoeffs cp = forward(st.p), cq = forward(st.q);
      for (int j = 0; j < g.size(); ++j) {
        cp[j] *= d;
        cq[j] *= d;
      }
      detail::shifted_inverse_modes(cp, cq, dt);
      SpectralCoeffs bp = forward(bt_p), bq = forward(bt_q);
      for (int j = 0; j < g.size(); ++j) {
        bp[j] = -bp[j];
        bq[j] = -bq[j];
      }
      detail::shifted_inverse_modes(bp, bq, dt);
      const double scale = detail::internal_scale(st.p, st.q, dt) +
                           detail::internal_scale(bt_p, bt_q, dt);
      z1_p = inverse_real(cp, scale);
      z1_q = inverse_real(cq, scale);
      z2_p = inverse_real(bp, scale);
      z2_q = inverse_real(bq, scale);
    } else {
      auto m = detail::block_shifted_matrix(g, d);
      RealField rp(g), rq(g);
      for (int a = 0; a < g.size(); ++a) {
        rp[a] = d * st.p[a];
        rq[a] = d * st.q[a];
      }
      std::tie(z1_p, z1_q) = detail::dense_block_solve(m, rp, rq, cfg.max_residual);
      for (int a = 0; a < g.size(); ++a) {
        rp[a] = -bt_p[a];
        rq[a] = -bt_q[a];
      }
      std::tie(z2_p, z2_q) = detail::dense_block_solve(m, rp, rq, cfg.max_residual);
    }
    RealField d1_p(g), d1_q(g);  // Z1 - Z^k
    for (int a = 0; a < g.size(); ++a) {
      d1_p[a] = z1_p[a] - st.p[a];
      d1_q[a] = z1_q[a] - st.q[a];
    }
    const double denom = 2.0 - detail::pair_g(gt, z2_p, z2_q);
    if (std::abs(denom) <= 1e-12)
      throw NumericalError("sav_step(alg2): near-singular SAV denominator " +
                           std::to_string(denom));
    const double r_mid = (2.0 * st.r + detail::pair_g(gt, d1_p, d1_q)) / denom;
    for (int a = 0; a < g.size(); ++a) {
      next.p[a] = 2.0 * (z1_p[a] + r_mid * z2_p[a]) - st.p[a];
      next.q[a] = 2.0 * (z1_q[a] + r_mid * z2_q[a]) - st.q[a];
    }
    next.r = 2.0 * r_mid - st.r;
    return next;
  }

  RealField dp(g), dq(g);
  for (int a = 0; a < g.size(); ++a) {
    dp[a] = next.p[a] - st.p[a];
    dq[a] = next.q[a] - st.q[a];
  }
  next.r = st.r + 0.5 * (inner(gt.g1, dq) + inner(gt.g2, dp));
  return next;
}

/// Algorithm 1 step driven by the extrapolation history.
inline SavState step_alg1(const SavState& st, const GHistory& h, const NlsProblem& prob,
                          const StepperConfig& cfg) {
  StepperConfig c = cfg;
  c.algorithm = SavAlgorithm::alg1;
  return sav_step(st, extrapolate_g(h), prob, c, cfg.tau);
}

/// Algorithm 2 step driven by the extrapolation history.
inline SavState step_alg2(const SavState& st, const GHistory& h, const NlsProblem& prob,
                          const StepperConfig& cfg) {
  StepperConfig c = cfg;
  c.algorithm = SavAlgorithm::alg2;
  return sav_step(st, extrapolate_g(h), prob, c, cfg.tau);
}

/// G~ for the first step. `predictor` evaluates g on a Strang half step of
/// size tau/2 (keeps the scheme second order from step one); `frozen` uses
/// g(u^0), locally first order, kept for ablation.
inline GPair bootstrap_gtilde(const SavState& st, const NlsProblem& prob, const StepperConfig& cfg,
                              double dt) {
  if (cfg.bootstrap == Bootstrap::frozen) {
    auto [g1, g2] = g_pair(st.p, st.q, prob);
    return GPair{std::move(g1), std::move(g2)};
  }
  ComplexField u = combine(st.p, st.q);
  ComplexField half = split_step_signed(u, SplitOrder::strang, 0.5 * dt, prob);
  auto [g1, g2] = g_pair(real_part(half), imag_part(half), prob);
  return GPair{std::move(g1), std::move(g2)};
}

struct StepRecord {
  long step = 0;
  double t = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
  double modified_hamiltonian = 0.0;
  double r = 0.0;
};

using SavObserver = std::function<void(const StepRecord&, const SavState&)>;

inline StepRecord make_record(long step, const SavState& st, const NlsProblem& prob) {
  const SpectralCoeffs cp = forward(st.p), cq = forward(st.q);
  const double sp = h1_seminorm(cp), sq = h1_seminorm(cq);
  const double kin = 0.5 * (sp * sp + sq * sq);
  StepRecord rec;
  rec.step = step;
  rec.t = st.time;
  rec.mass = mass(st.p, st.q);
  rec.hamiltonian = kin + e1(st.p, st.q, prob);
  rec.modified_hamiltonian = kin + st.r * st.r;
  rec.r = st.r;
  return rec;
}

struct SavRunResult {
  SavState state;
  double tau_used = 0.0;
  bool tau_adjusted = false;
  long steps = 0;
};

/// Advances to t_end = K * tau (tau adjusted to divide t_end exactly when
/// needed, and reported). The observer sees the initial state and then every
/// accepted step.
inline SavRunResult run(SavState st, const NlsProblem& prob, const StepperConfig& cfg, double t_end,
                        const SavObserver& observer = {}) {
  if (t_end < 0.0) throw std::invalid_argument("run: t_end must be nonnegative");
  SavRunResult result{std::move(st), cfg.tau, false, 0};
  if (t_end == 0.0) {
    if (observer) observer(make_record(0, result.state, prob), result.state);
    return result;
  }
  long k_steps = std::lround(t_end / cfg.tau);
  if (k_steps < 1) k_steps = 1;
  const double dt = t_end / static_cast<double>(k_steps);
  result.tau_used = dt;
  result.tau_adjusted = std::abs(dt - cfg.tau) > 1e-12 * cfg.tau;
  result.steps = k_steps;

  StepperConfig step_cfg = cfg;
  step_cfg.tau = dt;

  const double t0 = result.state.time;
  if (observer) observer(make_record(0, result.state, prob), result.state);

  GHistory history;
  {
    auto [g1, g2] = g_pair(result.state.p, result.state.q, prob);
    history.push(GPair{std::move(g1), std::move(g2)}, result.state.time);
  }
  for (long k = 0; k < k_steps; ++k) {
    GPair gt = (history.size() < 2) ? bootstrap_gtilde(result.state, prob, step_cfg, dt)
                                    : extrapolate_g(history);
    SavState next = [&]() -> SavState {
      try {
        return sav_step(result.state, gt, prob, step_cfg, dt);
      } catch (const NumericalError& err) {
        throw NumericalError("step " + std::to_string(k + 1) + ": " + err.what());
      }
    }();
    next.time = t0 + (k + 1) * dt;
    result.state = std::move(next);
    auto [g1, g2] = g_pair(result.state.p, result.state.q, prob);
    history.push(GPair{std::move(g1), std::move(g2)}, result.state.time);
    if (observer) observer(make_record(k + 1, result.state, prob), result.state);
  }
  return result;
}

}  // namespace savnls
