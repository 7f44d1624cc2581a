// Command-line front end: simulate | converge | groundstate | compare.
// All run parameters accept the same spec strings as config files; flags
// given on the command line override --config entries.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "savnls/savnls.hpp"

namespace {

using namespace savnls;

struct RawOptions {
  std::map<std::string, std::string> values;  // key -> value for flags that were set
  std::string config_path;
};

void add_run_flags(CLI::App* cmd, RawOptions& raw) {
  auto bind = [cmd, &raw](const std::string& flag, const std::string& key, const std::string& help) {
    auto opt = cmd->add_option_function<std::string>(
        flag, [&raw, key](const std::string& v) { raw.values[key] = v; }, help);
    opt->expected(1);
  };
  bind("--scheme", "scheme", "sav1|sav2|lie|strang (default sav2)");
  bind("--n", "n", "number of collocation points (even)");
  bind("--domain-half-length", "domain_half_length", "L, domain is [-L, L)");
  bind("--tau", "tau", "time step");
  bind("--t-end", "t_end", "final time");
  bind("--nonlinearity", "nonlinearity", "cubic:beta | power:beta:gamma | none");
  bind("--potential", "potential", "none | harmonic | file:PATH");
  bind("--ic", "ic", "soliton:a:beta:v | solitary | sine | plane:A:k | halpha:alpha:seed | file:PATH");
  bind("--ec", "ec", "energy shift E_c > 0");
  bind("--bootstrap", "bootstrap", "predictor | frozen (first-step extrapolation)");
  bind("--out", "out", "output CSV path (stdout when omitted)");
  bind("--seed", "seed", "RNG seed for random initial data");
  cmd->add_option("--config", raw.config_path, "key = value file; flags override its entries");
}

RunConfig build_config(const RawOptions& raw) {
  RunConfig cfg;
  if (!raw.config_path.empty())
    for (const auto& [key, value] : parse_config_file(raw.config_path))
      apply_config_entry(cfg, key, value);
  for (const auto& [key, value] : raw.values) apply_config_entry(cfg, key, value);
  return cfg;
}

int run_simulate(const RawOptions& raw) {
  RunConfig cfg = build_config(raw);
  if (cfg.out.empty()) {
    conservation_trace(cfg, std::cout);
  } else {
    conservation_trace_to_file(cfg, cfg.out);
    std::cout << "wrote " << cfg.out << "\n";
  }
  return 0;
}

int run_converge(const RawOptions& raw, int levels, const std::string& vary) {
  RunConfig cfg = build_config(raw);
  if (levels < 1) throw std::invalid_argument("--levels must be >= 1");
  ConvergenceStudy study;
  if (vary == "tau") {
    std::vector<double> taus;
    for (int j = 0; j < levels; ++j) taus.push_back(cfg.tau / double(1 << j));
    study = convergence_study_tau(cfg, taus);
  } else if (vary == "n") {
    std::vector<int> ns;
    for (int j = 0; j < levels; ++j) ns.push_back(cfg.n << j);
    study = convergence_study_n(cfg, ns);
  } else {
    throw std::invalid_argument("--vary: expected tau|n, got '" + vary + "'");
  }
  if (cfg.out.empty()) {
    write_convergence_csv(study, cfg, std::cout);
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + cfg.out);
    write_convergence_csv(study, cfg, out);
    std::cout << "wrote " << cfg.out << "\n";
  }
  std::printf("mean order: e_u %.3f, e_H %.3f\n", study.mean_order_u, study.mean_order_h);
  return 0;
}

int run_groundstate(const RawOptions& raw, const std::string& r_mode, double tol, long max_steps,
                    const std::string& phi_out) {
  RunConfig cfg = build_config(raw);
  if (raw.values.find("potential") == raw.values.end() && raw.config_path.empty())
    cfg.potential.kind = PotentialSpec::Kind::harmonic;
  double beta = 0.0;
  switch (cfg.nonlinearity.kind) {
    case NonlinearityKind::none: beta = 0.0; break;
    case NonlinearityKind::cubic: beta = cfg.nonlinearity.beta; break;
    default:
      throw std::invalid_argument("groundstate: only cubic (or none) nonlinearity is supported");
  }
  Grid1D g = cfg.grid();
  GroundStateProblem prob(g, cfg.potential.build(g), beta, cfg.ec, tol, max_steps);
  ComplexField u0 = cfg.ic.build(g);
  RealField phi0 = real_part(u0);
  GsOptions opt{cfg.tau, parse_gs_r_mode(r_mode), cfg.bootstrap == Bootstrap::predictor};
  GroundStateResult res = solve_ground_state(prob, phi0, opt);

  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + cfg.out);
    out << "# beta = " << beta << "\n# ec = " << cfg.ec << "\n# tau = " << cfg.tau
        << "\n# r_mode = " << r_mode << "\n";
    out << "step,E\n";
    for (std::size_t k = 0; k < res.energy_trace.size(); ++k)
      out << k << ',' << savnls::detail::fmt17(res.energy_trace[k]) << "\n";
  }
  if (!phi_out.empty()) {
    ComplexField phi_c(g);
    for (int a = 0; a < g.size(); ++a) phi_c[a] = cplx{res.phi[a], 0.0};
    write_field_csv(phi_c, phi_out);
  }
  std::printf("converged=%s iterations=%ld E=%.10f E_mod=%.10f mu=%.10f monotone=%s\n",
              res.converged ? "yes" : "no", res.iterations, res.energy, res.modified_energy,
              res.chemical_potential, res.energy_monotone ? "yes" : "no");
  if (!res.converged) return 3;
  return 0;
}

int run_compare(const RawOptions& raw, const std::string& schemes_csv) {
  RunConfig cfg = build_config(raw);
  std::vector<Scheme> schemes;
  for (const std::string& name : savnls::detail::split(schemes_csv, ','))
    schemes.push_back(parse_scheme(name));
  std::printf("%-8s %-13s %-13s %-13s\n", "scheme", "mass_drift", "H_drift", "e_u(T)");
  for (Scheme s : schemes) {
    RunConfig member = cfg;
    member.scheme = s;
    SimulationResult res = simulate(member, true);
    double mass_drift = 0.0, h_drift = 0.0;
    for (const TraceRow& row : res.trace) {
      mass_drift = std::max(mass_drift, std::abs(row.mass - res.trace.front().mass));
      h_drift = std::max(h_drift, std::abs(row.h - res.trace.front().h));
    }
    std::printf("%-8s %-13.6e %-13.6e %-13.6e\n", scheme_name(s), mass_drift, h_drift,
                res.trace.back().e_u);
    if (!cfg.out.empty()) {
      const std::string path = cfg.out + "." + scheme_name(s) + ".csv";
      conservation_trace_to_file(member, path);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving SAV / splitting solver for the periodic 1-D NLS equation"};
  app.require_subcommand(1);

  RawOptions sim_raw, conv_raw, gs_raw, cmp_raw;
  int levels = 6;
  std::string vary = "tau";
  std::string r_mode = "reset";
  std::string phi_out;
  double gs_tol = 1e-8;
  long gs_max_steps = 200000;
  std::string schemes_csv = "sav2,strang,lie";

  CLI::App* sim = app.add_subcommand("simulate", "run one scheme and emit a conservation trace");
  add_run_flags(sim, sim_raw);

  CLI::App* conv = app.add_subcommand("converge", "run a refinement family and estimate orders");
  add_run_flags(conv, conv_raw);
  conv->add_option("--levels", levels, "number of refinement levels (default 6)");
  conv->add_option("--vary", vary, "tau | n (default tau)");

  CLI::App* gs = app.add_subcommand("groundstate", "normalized gradient-flow ground state");
  add_run_flags(gs, gs_raw);
  gs->add_option("--gs-r-mode", r_mode, "reset | carry (default reset)");
  gs->add_option("--tol", gs_tol, "stopping tolerance on ||dphi||/tau (default 1e-8)");
  gs->add_option("--max-steps", gs_max_steps, "iteration cap (default 200000)");
  gs->add_option("--phi-out", phi_out, "write the converged state as a two-column CSV");

  CLI::App* cmp = app.add_subcommand("compare", "run several schemes on one problem");
  add_run_flags(cmp, cmp_raw);
  cmp->add_option("--schemes", schemes_csv, "comma list (default sav2,strang,lie)");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return run_simulate(sim_raw);
    if (conv->parsed()) return run_converge(conv_raw, levels, vary);
    if (gs->parsed()) return run_groundstate(gs_raw, r_mode, gs_tol, gs_max_steps, phi_out);
    if (cmp->parsed()) return run_compare(cmp_raw, schemes_csv);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const savnls::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
