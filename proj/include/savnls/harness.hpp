#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "savnls/initdata.hpp"
#include "savnls/model.hpp"
#include "savnls/sav.hpp"
#include "savnls/splitting.hpp"

namespace savnls {

enum class Scheme { sav1, sav2, lie, strang };

inline bool is_sav(Scheme s) { return s == Scheme::sav1 || s == Scheme::sav2; }

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::sav1: return "sav1";
    case Scheme::sav2: return "sav2";
    case Scheme::lie: return "lie";
    case Scheme::strang: return "strang";
  }
  return "?";
}

/// e_u = || |U| - |u_ref| ||_0,  e_H = |H(ref) - H(U)|,  e_Hmod = |H(ref) - H~|.
struct ErrorMetrics {
  double e_u = std::numeric_limits<double>::quiet_NaN();
  double e_h = std::numeric_limits<double>::quiet_NaN();
  double e_hmod = std::numeric_limits<double>::quiet_NaN();
};

inline ErrorMetrics compute_errors(const ComplexField& u, const ComplexField& reference,
                                   const NlsProblem& prob,
                                   std::optional<double> h_mod = std::nullopt) {
  if (!(u.grid == reference.grid))
    throw std::invalid_argument("compute_errors: grids differ");
  ErrorMetrics m;
  double acc = 0.0;
  for (int a = 0; a < u.size(); ++a) {
    const double d = std::abs(u[a]) - std::abs(reference[a]);
    acc += d * d;
  }
  m.e_u = std::sqrt(u.grid.spacing() * acc);
  const double h_ref = hamiltonian(reference, prob);
  m.e_h = std::abs(h_ref - hamiltonian(u, prob));
  if (h_mod) m.e_hmod = std::abs(h_ref - *h_mod);
  return m;
}

// ---------------------------------------------------------------------------
// run configuration

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::cubic;
  double beta = -1.0;
  double gamma = 2.0;

  Nonlinearity build() const {
    switch (kind) {
      case NonlinearityKind::none: return Nonlinearity::none();
      case NonlinearityKind::cubic: return Nonlinearity::cubic(beta);
      case NonlinearityKind::power: return Nonlinearity::power(beta, gamma);
      default: throw std::invalid_argument("NonlinearitySpec: unsupported kind");
    }
  }
  std::string describe() const {
    if (kind == NonlinearityKind::none) return "none";
    if (kind == NonlinearityKind::cubic) return "cubic:" + std::to_string(beta);
    return "power:" + std::to_string(beta) + ":" + std::to_string(gamma);
  }
};

struct PotentialSpec {
  enum class Kind { none, harmonic, file } kind = Kind::none;
  std::string path;

  RealField build(const Grid1D& g) const {
    switch (kind) {
      case Kind::none: return RealField(g);
      case Kind::harmonic: return harmonic_potential(g);
      case Kind::file: {
        ComplexField v = read_field_csv(path, g);
        return real_part(v);
      }
    }
    return RealField(g);
  }
  std::string describe() const {
    if (kind == Kind::none) return "none";
    if (kind == Kind::harmonic) return "harmonic";
    return "file:" + path;
  }
};

struct InitialDataSpec {
  enum class Kind { soliton, solitary, sine, plane, halpha, file } kind = Kind::solitary;
  double a = 1.0, beta = -1.0, v = 1.0;  // soliton
  double amplitude = 1.0;                // plane
  int mode = 1;                          // plane
  double alpha = 2.0;                    // halpha
  std::uint64_t seed = 1;                // halpha
  std::string path;                      // file

  ComplexField build(const Grid1D& g) const {
    switch (kind) {
      case Kind::soliton: return bright_soliton(a, beta, v, 0.0, g);
      case Kind::solitary: return solitary_wave(0.0, g);
      case Kind::sine: return sine_wave(g);
      case Kind::plane: return plane_wave(amplitude, mode, g);
      case Kind::halpha: return h_alpha_random(alpha, seed, g);
      case Kind::file: return read_field_csv(path, g);
    }
    return ComplexField(g);
  }

  /// Exact solution samples at time t when a closed form is available for
  /// the implemented equation; nullopt means studies fall back to a fine-step
  /// self reference. The bright soliton's printed closed form belongs to the
  /// half-Laplacian convention, so it gets no exact reference here.
  std::optional<ComplexField> exact_at(double t, const Grid1D& g, const NlsProblem& prob) const {
    switch (kind) {
      case Kind::solitary:
        if (prob.nonlinearity.kind() == NonlinearityKind::cubic &&
            prob.nonlinearity.beta() == -1.0 && linf_norm(prob.potential) == 0.0)
          return solitary_wave(t, g);
        return std::nullopt;
      case Kind::plane: {
        // constant |u| makes the nonlinear and potential terms pure phase
        double v0 = prob.potential[0];
        for (int i = 0; i < g.size(); ++i)
          if (prob.potential[i] != v0) return std::nullopt;
        const double k = std::numbers::pi * mode / g.half_length();
        const double omega = k * k + v0 + prob.nonlinearity.f(amplitude * amplitude);
        ComplexField u(g);
        for (int i = 0; i < g.size(); ++i)
          u[i] = std::polar(amplitude, k * g.node(i) - omega * t);
        return u;
      }
      default: return std::nullopt;
    }
  }

  std::string describe() const {
    switch (kind) {
      case Kind::soliton:
        return "soliton:" + std::to_string(a) + ":" + std::to_string(beta) + ":" + std::to_string(v);
      case Kind::solitary: return "solitary";
      case Kind::sine: return "sine";
      case Kind::plane: return "plane:" + std::to_string(amplitude) + ":" + std::to_string(mode);
      case Kind::halpha: return "halpha:" + std::to_string(alpha) + ":" + std::to_string(seed);
      case Kind::file: return "file:" + path;
    }
    return "?";
  }
};

struct RunConfig {
  Scheme scheme = Scheme::sav2;
  int n = 256;
  double half_length = std::numbers::pi;
  double tau = 1e-2;
  double t_end = 1.0;
  NonlinearitySpec nonlinearity;
  PotentialSpec potential;
  InitialDataSpec ic;
  double ec = 1.0;
  bool adapt_shift = true;
  Bootstrap bootstrap = Bootstrap::predictor;
  std::string out;
  std::uint64_t seed = 1;

  Grid1D grid() const { return Grid1D(n, half_length); }

  NlsProblem problem() const {
    Grid1D g = grid();
    return NlsProblem(g, potential.build(g), nonlinearity.build(), ec, adapt_shift);
  }
};

// ---------------------------------------------------------------------------
// simulation driver

struct TraceRow {
  long step = 0;
  double t = 0.0;
  double mass = 0.0;
  double h = 0.0;
  double h_mod = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double e_u = std::numeric_limits<double>::quiet_NaN();
};

struct SimulationResult {
  ComplexField u_final;
  std::vector<TraceRow> trace;
  double tau_used = 0.0;
  bool tau_adjusted = false;
  double h0 = 0.0;           // Hamiltonian of the initial data
  bool exact_reference = false;
  double shift_used = 0.0;   // E_c after optional adaptation
};

/// One forward run of the configured scheme; the trace carries per-step
/// conserved-quantity diagnostics and, when a closed form exists, e_u.
inline SimulationResult simulate(const RunConfig& cfg, bool with_trace = true) {
  const Grid1D g = cfg.grid();
  ComplexField u0 = cfg.ic.build(g);
  NlsProblem prob = prepared_problem(u0, cfg.problem());

  SimulationResult result{ComplexField(g), {}, 0.0, false, 0.0, false, 0.0};
  result.h0 = hamiltonian(u0, prob);
  result.shift_used = prob.energy_shift;
  const bool have_exact = cfg.ic.exact_at(0.0, g, prob).has_value();
  result.exact_reference = have_exact;

  auto e_u_against_exact = [&](const ComplexField& u, double t) {
    std::optional<ComplexField> ref = cfg.ic.exact_at(t, g, prob);
    if (!ref) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (int a = 0; a < g.size(); ++a) {
      const double d = std::abs(u[a]) - std::abs((*ref)[a]);
      acc += d * d;
    }
    return std::sqrt(g.spacing() * acc);
  };

  if (is_sav(cfg.scheme)) {
    StepperConfig scfg(cfg.tau,
                       cfg.scheme == Scheme::sav1 ? SavAlgorithm::alg1 : SavAlgorithm::alg2,
                       ShiftedSolver::fourier_diagonal, cfg.bootstrap);
    SavState st = init_state(u0, prob);
    SavObserver obs;
    if (with_trace) {
      obs = [&](const StepRecord& rec, const SavState& s) {
        TraceRow row{rec.step, rec.t, rec.mass, rec.hamiltonian, rec.modified_hamiltonian, rec.r,
                     std::numeric_limits<double>::quiet_NaN()};
        if (have_exact) row.e_u = e_u_against_exact(combine(s.p, s.q), rec.t);
        result.trace.push_back(row);
      };
    }
    SavRunResult rr = run(std::move(st), prob, scfg, cfg.t_end, obs);
    result.u_final = combine(rr.state.p, rr.state.q);
    result.tau_used = rr.tau_used;
    result.tau_adjusted = rr.tau_adjusted;
  } else {
    long k_steps = cfg.t_end > 0.0 ? std::lround(cfg.t_end / cfg.tau) : 0;
    if (cfg.t_end > 0.0 && k_steps < 1) k_steps = 1;
    const double dt = k_steps > 0 ? cfg.t_end / static_cast<double>(k_steps) : cfg.tau;
    result.tau_used = dt;
    result.tau_adjusted = k_steps > 0 && std::abs(dt - cfg.tau) > 1e-12 * cfg.tau;
    SplitScheme scheme(cfg.scheme == Scheme::lie ? SplitOrder::lie : SplitOrder::strang, dt);
    ComplexField u = u0;
    auto emit = [&](long step, double t) {
      if (!with_trace) return;
      TraceRow row{step, t, mass(u), hamiltonian(u, prob),
                   std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
      if (have_exact) row.e_u = e_u_against_exact(u, t);
      result.trace.push_back(row);
    };
    emit(0, 0.0);
    for (long k = 0; k < k_steps; ++k) {
      u = split_step(u, scheme, prob);
      emit(k + 1, (k + 1) * dt);
    }
    result.u_final = std::move(u);
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV output

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::vector<std::string> config_metadata(const RunConfig& cfg, const SimulationResult& res) {
  std::vector<std::string> lines;
  auto kv = [&lines](const std::string& k, const std::string& v) {
    lines.push_back("# " + k + " = " + v);
  };
  kv("scheme", scheme_name(cfg.scheme));
  kv("n", std::to_string(cfg.n));
  kv("domain_half_length", detail::fmt17(cfg.half_length));
  kv("tau", detail::fmt17(res.tau_used));
  kv("tau_adjusted", res.tau_adjusted ? "true" : "false");
  kv("t_end", detail::fmt17(cfg.t_end));
  kv("nonlinearity", cfg.nonlinearity.describe());
  kv("potential", cfg.potential.describe());
  kv("ic", cfg.ic.describe());
  kv("ec", detail::fmt17(res.shift_used));
  kv("bootstrap", cfg.bootstrap == Bootstrap::predictor ? "predictor" : "frozen");
  kv("seed", std::to_string(cfg.seed));
  kv("reference", res.exact_reference ? "exact" : "none");
  return lines;
}

/// Full per-step time series with the pinned header; returns the rows.
inline std::vector<TraceRow> conservation_trace(const RunConfig& cfg, std::ostream& out) {
  SimulationResult res = simulate(cfg, true);
  for (const std::string& line : config_metadata(cfg, res)) out << line << "\n";
  out << "step,t,mass,H,H_mod,r,e_u\n";
  for (const TraceRow& row : res.trace) {
    out << row.step << ',' << detail::fmt17(row.t) << ',' << detail::fmt17(row.mass) << ','
        << detail::fmt17(row.h) << ',' << detail::fmt17(row.h_mod) << ',' << detail::fmt17(row.r)
        << ',' << detail::fmt17(row.e_u) << "\n";
  }
  return res.trace;
}

inline std::vector<TraceRow> conservation_trace_to_file(const RunConfig& cfg,
                                                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("conservation_trace: cannot open " + path);
  return conservation_trace(cfg, out);
}

// ---------------------------------------------------------------------------
// convergence studies

struct ConvergenceRow {
  double param = 0.0;
  double e_u = std::numeric_limits<double>::quiet_NaN();
  double e_h = std::numeric_limits<double>::quiet_NaN();
  double e_hmod = std::numeric_limits<double>::quiet_NaN();
  double order_u = std::numeric_limits<double>::quiet_NaN();
  double order_h = std::numeric_limits<double>::quiet_NaN();
};

/// Mean observed order from consecutive rows, excluding rows within 10x of
/// the roundoff floor. The floor is the finest-parameter error when the last
/// refinement no longer reduces it (plateau), zero otherwise.
inline double mean_order(const std::vector<double>& params, const std::vector<double>& errs) {
  if (params.size() != errs.size() || errs.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  const std::size_t m = errs.size();
  double floor_est = 0.0;
  if (errs[m - 2] > 0.0 && errs[m - 1] > 0.0) {
    const double last_order =
        std::log(errs[m - 2] / errs[m - 1]) / std::log(params[m - 2] / params[m - 1]);
    if (last_order < 0.5) floor_est = errs[m - 1];
  }
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!(errs[i] > 10.0 * floor_est) || !(errs[i + 1] > 10.0 * floor_est)) continue;
    if (!(errs[i] > 0.0) || !(errs[i + 1] > 0.0)) continue;
    acc += std::log(errs[i] / errs[i + 1]) / std::log(params[i] / params[i + 1]);
    ++count;
  }
  return count > 0 ? acc / count : std::numeric_limits<double>::quiet_NaN();
}

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double mean_order_u = std::numeric_limits<double>::quiet_NaN();
  double mean_order_h = std::numeric_limits<double>::quiet_NaN();
  bool self_reference = false;
};

/// The sav2 fine-step reference field used when no closed form exists;
/// studies across several schemes on the same problem can compute it once.
inline ComplexField self_reference_field(const RunConfig& base, double tau_min) {
  RunConfig cfg = base;
  cfg.tau = tau_min / 16.0;
  cfg.scheme = Scheme::sav2;
  return simulate(cfg, false).u_final;
}

/// Temporal convergence over the given step sizes (strictly decreasing).
/// Errors are measured at t_end against the exact solution when available,
/// otherwise against a sav2 self reference at tau_min/16 (precomputable via
/// self_reference_field and passed in `shared_reference`).
inline ConvergenceStudy convergence_study_tau(const RunConfig& base, std::vector<double> taus,
                                              const ComplexField* shared_reference = nullptr) {
  if (taus.size() < 1) throw std::invalid_argument("convergence_study_tau: empty family");
  for (std::size_t i = 0; i + 1 < taus.size(); ++i)
    if (!(taus[i] > taus[i + 1]))
      throw std::invalid_argument("convergence_study_tau: taus must decrease");

  const Grid1D g = base.grid();
  NlsProblem prob = prepared_problem(base.ic.build(g), base.problem());

  ConvergenceStudy study;
  std::optional<ComplexField> exact = base.ic.exact_at(base.t_end, g, prob);
  study.self_reference = !exact.has_value();

  auto run_member = [&](double tau, Scheme scheme) {
    RunConfig cfg = base;
    cfg.tau = tau;
    cfg.scheme = scheme;
    return simulate(cfg, false);
  };

  std::future<SimulationResult> ref_future;
  if (study.self_reference && shared_reference == nullptr)
    ref_future = std::async(std::launch::async, run_member, taus.back() / 16.0, Scheme::sav2);

  std::vector<std::future<SimulationResult>> members;
  members.reserve(taus.size());
  for (double tau : taus)
    members.push_back(std::async(std::launch::async, run_member, tau, base.scheme));

  ComplexField reference =
      study.self_reference
          ? (shared_reference ? *shared_reference : ref_future.get().u_final)
          : std::move(*exact);

  std::vector<double> eus, ehs;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    SimulationResult res = members[i].get();
    std::optional<double> h_mod;
    if (is_sav(base.scheme) && !res.trace.empty()) h_mod = res.trace.back().h_mod;
    ErrorMetrics m = compute_errors(res.u_final, reference, prob, h_mod);
    ConvergenceRow row;
    row.param = res.tau_used;
    row.e_u = m.e_u;
    row.e_h = m.e_h;
    row.e_hmod = m.e_hmod;
    if (i > 0) {
      row.order_u = std::log2(eus.back() / m.e_u);
      row.order_h = std::log2(ehs.back() / m.e_h);
    }
    eus.push_back(m.e_u);
    ehs.push_back(m.e_h);
    study.rows.push_back(row);
  }
  study.mean_order_u = mean_order(taus, eus);
  study.mean_order_h = mean_order(taus, ehs);
  return study;
}

/// Spatial self-convergence under N-doubling at fixed tau: each member field
/// is compared with the finest run restricted to its (nested) nodes.
inline ConvergenceStudy convergence_study_n(const RunConfig& base, std::vector<int> ns) {
  if (ns.size() < 2) throw std::invalid_argument("convergence_study_n: need at least two sizes");
  for (std::size_t i = 0; i + 1 < ns.size(); ++i)
    if (!(2 * ns[i] == ns[i + 1]))
      throw std::invalid_argument("convergence_study_n: sizes must double");

  auto run_member = [&](int n) {
    RunConfig cfg = base;
    cfg.n = n;
    return simulate(cfg, false);
  };
  std::future<SimulationResult> fine = std::async(std::launch::async, run_member, 2 * ns.back());
  std::vector<std::future<SimulationResult>> members;
  for (int n : ns) members.push_back(std::async(std::launch::async, run_member, n));
  ComplexField reference = fine.get().u_final;

  ConvergenceStudy study;
  study.self_reference = true;
  std::vector<double> params, eus;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    SimulationResult res = members[i].get();
    Grid1D coarse = res.u_final.grid;
    ComplexField restricted = restrict_to(reference, coarse);
    double acc = 0.0;
    for (int a = 0; a < coarse.size(); ++a) {
      const double d = std::abs(res.u_final[a]) - std::abs(restricted[a]);
      acc += d * d;
    }
    ConvergenceRow row;
    row.param = static_cast<double>(ns[i]);
    row.e_u = std::sqrt(coarse.spacing() * acc);
    if (i > 0) row.order_u = std::log2(eus.back() / row.e_u);
    params.push_back(1.0 / ns[i]);
    eus.push_back(row.e_u);
    study.rows.push_back(row);
  }
  study.mean_order_u = mean_order(params, eus);
  return study;
}

inline void write_convergence_csv(const ConvergenceStudy& study, const RunConfig& base,
                                  std::ostream& out) {
  out << "# scheme = " << scheme_name(base.scheme) << "\n";
  out << "# ic = " << base.ic.describe() << "\n";
  out << "# nonlinearity = " << base.nonlinearity.describe() << "\n";
  out << "# t_end = " << detail::fmt17(base.t_end) << "\n";
  out << "# reference = " << (study.self_reference ? "self" : "exact") << "\n";
  out << "# mean_order_u = " << detail::fmt17(study.mean_order_u) << "\n";
  out << "# mean_order_H = " << detail::fmt17(study.mean_order_h) << "\n";
  out << "param,e_u,e_H,e_Hmod,order_u,order_H\n";
  auto cell = [](double x) { return std::isnan(x) ? std::string() : detail::fmt17(x); };
  for (const ConvergenceRow& row : study.rows) {
    out << detail::fmt17(row.param) << ',' << cell(row.e_u) << ',' << cell(row.e_h) << ','
        << cell(row.e_hmod) << ',' << cell(row.order_u) << ',' << cell(row.order_h) << "\n";
  }
}

/// Two-column (Re, Im) field CSV, the same layout read_field_csv accepts.
inline void write_field_csv(const ComplexField& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("write_field_csv: cannot open " + path);
  for (int a = 0; a < u.size(); ++a)
    out << detail::fmt17(u[a].real()) << ',' << detail::fmt17(u[a].imag()) << "\n";
}

}  // namespace savnls
