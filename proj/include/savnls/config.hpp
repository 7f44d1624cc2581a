#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "savnls/groundstate.hpp"
#include "savnls/harness.hpp"

namespace savnls {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

inline double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (...) {
    throw std::invalid_argument("cannot parse number '" + s + "' in " + what);
  }
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace detail

inline Scheme parse_scheme(const std::string& s) {
  if (s == "sav1") return Scheme::sav1;
  if (s == "sav2") return Scheme::sav2;
  if (s == "lie") return Scheme::lie;
  if (s == "strang") return Scheme::strang;
  throw std::invalid_argument("--scheme: unknown scheme '" + s +
                              "' (expected sav1|sav2|lie|strang)");
}

inline Bootstrap parse_bootstrap(const std::string& s) {
  if (s == "predictor") return Bootstrap::predictor;
  if (s == "frozen") return Bootstrap::frozen;
  throw std::invalid_argument("--bootstrap: expected predictor|frozen, got '" + s + "'");
}

inline GsRMode parse_gs_r_mode(const std::string& s) {
  if (s == "reset") return GsRMode::reset;
  if (s == "carry") return GsRMode::carry;
  throw std::invalid_argument("--gs-r-mode: expected reset|carry, got '" + s + "'");
}

/// cubic:beta | power:beta:gamma | none
inline NonlinearitySpec parse_nonlinearity(const std::string& s) {
  auto parts = detail::split(s, ':');
  NonlinearitySpec spec;
  if (parts[0] == "none") {
    if (parts.size() != 1) throw std::invalid_argument("--nonlinearity: none takes no parameters");
    spec.kind = NonlinearityKind::none;
  } else if (parts[0] == "cubic") {
    if (parts.size() != 2)
      throw std::invalid_argument("--nonlinearity: expected cubic:beta, got '" + s + "'");
    spec.kind = NonlinearityKind::cubic;
    spec.beta = detail::parse_number(parts[1], "--nonlinearity");
  } else if (parts[0] == "power") {
    if (parts.size() != 3)
      throw std::invalid_argument("--nonlinearity: expected power:beta:gamma, got '" + s + "'");
    spec.kind = NonlinearityKind::power;
    spec.beta = detail::parse_number(parts[1], "--nonlinearity");
    spec.gamma = detail::parse_number(parts[2], "--nonlinearity");
    if (!(spec.gamma > 0.0)) throw std::invalid_argument("--nonlinearity: gamma must be positive");
  } else {
    throw std::invalid_argument("--nonlinearity: unknown form '" + s + "'");
  }
  return spec;
}

/// none | harmonic | file:PATH
inline PotentialSpec parse_potential(const std::string& s) {
  PotentialSpec spec;
  if (s == "none") {
    spec.kind = PotentialSpec::Kind::none;
  } else if (s == "harmonic") {
    spec.kind = PotentialSpec::Kind::harmonic;
  } else if (s.rfind("file:", 0) == 0) {
    spec.kind = PotentialSpec::Kind::file;
    spec.path = s.substr(5);
    if (spec.path.empty()) throw std::invalid_argument("--potential: empty file path");
  } else {
    throw std::invalid_argument("--potential: unknown form '" + s + "'");
  }
  return spec;
}

/// soliton:a:beta:v | solitary | sine | plane:A:k | halpha:alpha:seed | file:PATH
inline InitialDataSpec parse_ic(const std::string& s) {
  InitialDataSpec spec;
  if (s == "solitary") {
    spec.kind = InitialDataSpec::Kind::solitary;
    return spec;
  }
  if (s == "sine") {
    spec.kind = InitialDataSpec::Kind::sine;
    return spec;
  }
  if (s.rfind("file:", 0) == 0) {
    spec.kind = InitialDataSpec::Kind::file;
    spec.path = s.substr(5);
    if (spec.path.empty()) throw std::invalid_argument("--ic: empty file path");
    return spec;
  }
  auto parts = detail::split(s, ':');
  if (parts[0] == "soliton") {
    if (parts.size() != 4)
      throw std::invalid_argument("--ic: expected soliton:a:beta:v, got '" + s + "'");
    spec.kind = InitialDataSpec::Kind::soliton;
    spec.a = detail::parse_number(parts[1], "--ic");
    spec.beta = detail::parse_number(parts[2], "--ic");
    spec.v = detail::parse_number(parts[3], "--ic");
    if (!(spec.beta < 0.0)) throw std::invalid_argument("--ic: soliton requires beta < 0");
    return spec;
  }
  if (parts[0] == "plane") {
    if (parts.size() != 3)
      throw std::invalid_argument("--ic: expected plane:A:k, got '" + s + "'");
    spec.kind = InitialDataSpec::Kind::plane;
    spec.amplitude = detail::parse_number(parts[1], "--ic");
    spec.mode = static_cast<int>(detail::parse_number(parts[2], "--ic"));
    return spec;
  }
  if (parts[0] == "halpha") {
    if (parts.size() != 3)
      throw std::invalid_argument("--ic: expected halpha:alpha:seed, got '" + s + "'");
    spec.kind = InitialDataSpec::Kind::halpha;
    spec.alpha = detail::parse_number(parts[1], "--ic");
    spec.seed = static_cast<std::uint64_t>(detail::parse_number(parts[2], "--ic"));
    if (!(spec.alpha > 0.0)) throw std::invalid_argument("--ic: halpha requires alpha > 0");
    return spec;
  }
  throw std::invalid_argument("--ic: unknown form '" + s + "'");
}

/// key = value lines, UTF-8, '#' comments. Keys use the long flag names with
/// either dashes or underscores.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("--config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = detail::trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    std::string key = detail::trim(stripped.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    kv[key] = detail::trim(stripped.substr(eq + 1));
  }
  return kv;
}

/// Applies one key/value onto a RunConfig; shared by the config file and the
/// CLI flag merge (flags override file entries by being applied last).
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scheme") cfg.scheme = parse_scheme(value);
  else if (key == "n") cfg.n = static_cast<int>(detail::parse_number(value, "n"));
  else if (key == "domain_half_length") cfg.half_length = detail::parse_number(value, key);
  else if (key == "tau") cfg.tau = detail::parse_number(value, key);
  else if (key == "t_end") cfg.t_end = detail::parse_number(value, key);
  else if (key == "nonlinearity") cfg.nonlinearity = parse_nonlinearity(value);
  else if (key == "potential") cfg.potential = parse_potential(value);
  else if (key == "ic") cfg.ic = parse_ic(value);
  else if (key == "ec") cfg.ec = detail::parse_number(value, key);
  else if (key == "adapt_shift") cfg.adapt_shift = (value == "true" || value == "1");
  else if (key == "bootstrap") cfg.bootstrap = parse_bootstrap(value);
  else if (key == "out") cfg.out = value;
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_number(value, key));
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace savnls
