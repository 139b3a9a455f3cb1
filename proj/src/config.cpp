//
// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpopt/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpopt {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::map<std::string, std::string>& kv,
                    const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + it->second + "'", key);
  }
}

long parse_long(const std::map<std::string, std::string>& kv,
                const std::string& key, long fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    const long v = std::stol(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + it->second + "'", key);
  }
}

std::uint64_t parse_u64(const std::map<std::string, std::string>& kv,
                        const std::string& key, std::uint64_t fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected an unsigned integer, got '" + it->second + "'",
                      key);
  }
}

bool parse_bool(const std::map<std::string, std::string>& kv,
                const std::string& key, bool fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("expected true/false, got '" + it->second + "'", key);
}

std::string parse_string(const std::map<std::string, std::string>& kv,
                         const std::string& key, const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::map<std::string, std::string>& kv,
                          const std::string& key, Parse parse) {
  auto it = kv.find(key);
  std::vector<T> out;
  if (it == kv.end()) return out;
  std::istringstream ss(it->second);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    try {
      out.push_back(parse(token));
    } catch (const std::exception&) {
      throw ConfigError("bad list element '" + token + "'", key);
    }
  }
  if (out.empty()) throw ConfigError("empty list", key);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string ConfigError::format(const std::string& message,
                                const std::string& field, int line) {
  std::string out = "config error";
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  if (!field.empty()) out += " [" + field + "]";
  return out + ": " + message;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kScMin: return "sc_min";
    case ExperimentKind::kConvexMinPhased: return "convex_min_phased";
    case ExperimentKind::kScScSaddle: return "scsc_saddle";
    case ExperimentKind::kCcSaddle: return "cc_saddle";
    case ExperimentKind::kCscSaddle: return "csc_saddle";
    case ExperimentKind::kStabilityProbe: return "stability_probe";
    case ExperimentKind::kUtilitySweep: return "utility_sweep";
  }
  throw std::logic_error("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "sc_min") return ExperimentKind::kScMin;
  if (name == "convex_min_phased") return ExperimentKind::kConvexMinPhased;
  if (name == "scsc_saddle") return ExperimentKind::kScScSaddle;
  if (name == "cc_saddle") return ExperimentKind::kCcSaddle;
  if (name == "csc_saddle") return ExperimentKind::kCscSaddle;
  if (name == "stability_probe") return ExperimentKind::kStabilityProbe;
  if (name == "utility_sweep") return ExperimentKind::kUtilitySweep;
  throw ConfigError("unknown experiment kind '" + name + "'", "experiment.kind");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value'", "", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", "", line_no);
    if (!kv.emplace(key, value).second) {
      throw ConfigError("duplicate key", key, line_no);
    }
  }
  return kv;
}

RunConfig parse_run_config(const std::string& text) {
  const auto kv = parse_key_values(text);
  RunConfig c;
  c.kind = experiment_kind_from_string(
      parse_string(kv, "experiment.kind", "sc_min"));
  c.family = parse_string(kv, "problem.family", "quadratic");
  c.n = static_cast<int>(parse_long(kv, "problem.n", c.n));
  c.dim = static_cast<int>(parse_long(kv, "problem.d", c.dim));
  c.dim_y = static_cast<int>(parse_long(kv, "problem.d_y", c.dim_y));
  c.mu = parse_double(kv, "problem.mu", c.mu);
  c.mu_x = parse_double(kv, "problem.mu_x", c.mu_x);
  c.mu_y = parse_double(kv, "problem.mu_y", c.mu_y);
  c.sample_radius = parse_double(kv, "problem.sample_radius", c.sample_radius);
  c.mean_shift = parse_double(kv, "problem.mean_shift", c.mean_shift);
  c.domain_radius = parse_double(kv, "problem.domain_radius", c.domain_radius);
  c.epsilon = parse_double(kv, "privacy.epsilon", c.epsilon);
  c.delta = parse_double(kv, "privacy.delta", c.delta);
  c.solver = parse_string(kv, "solver.kind", c.solver);
  c.solver_max_evals = parse_long(kv, "solver.max_evals", c.solver_max_evals);
  c.budget_constant = parse_double(kv, "solver.budget_constant", c.budget_constant);
  c.seed = parse_u64(kv, "run.seed", c.seed);
  c.repetitions = static_cast<int>(parse_long(kv, "run.repetitions", c.repetitions));
  c.out_dir = parse_string(kv, "run.out", c.out_dir);
  c.no_noise = parse_bool(kv, "run.no_noise", c.no_noise);
  c.mu_override = parse_double(kv, "run.mu", c.mu_override);
  c.probe_trials = static_cast<int>(parse_long(kv, "probe.trials", c.probe_trials));
  c.probe_reg_mu = parse_double(kv, "probe.reg_mu", c.probe_reg_mu);
  c.probe_ns = parse_list<int>(kv, "probe.n_list", [](const std::string& s) {
    return std::stoi(s);
  });
  c.sweep_n = parse_list<int>(kv, "sweep.n", [](const std::string& s) {
    return std::stoi(s);
  });
  c.sweep_epsilon = parse_list<double>(
      kv, "sweep.epsilon", [](const std::string& s) { return std::stod(s); });
  c.sweep_seeds = static_cast<int>(parse_long(kv, "sweep.seeds", c.sweep_seeds));
  c.sweep_kind = parse_string(kv, "sweep.kind", c.sweep_kind);
  c.holdout_factor =
      static_cast<int>(parse_long(kv, "eval.holdout_factor", c.holdout_factor));

  // Validation.
  if (c.n < 1) throw ConfigError("n must be >= 1", "problem.n");
  if (c.dim < 1) throw ConfigError("d must be >= 1", "problem.d");
  if (c.family != "quadratic" && c.family != "logistic" && c.family != "bilinear") {
    throw ConfigError("unknown family '" + c.family + "'", "problem.family");
  }
  c.delta_auto = c.delta == 0;
  if (c.delta_auto) c.delta = 0.5 / c.n;
  if (!(c.epsilon > 0) || !(c.epsilon < 1)) {
    throw ConfigError("epsilon must lie in (0, 1)", "privacy.epsilon");
  }
  if (!(c.delta > 0) || !(c.delta < 1.0 / c.n)) {
    throw ConfigError("delta must lie in (0, 1/n) for n = " + std::to_string(c.n),
                      "privacy.delta");
  }
  if (c.repetitions < 1) throw ConfigError("repetitions must be >= 1", "run.repetitions");
  const bool minimax_kind = c.kind == ExperimentKind::kScScSaddle ||
                            c.kind == ExperimentKind::kCcSaddle ||
                            c.kind == ExperimentKind::kCscSaddle;
  if (minimax_kind && c.family != "bilinear") {
    throw ConfigError("kind " + to_string(c.kind) + " needs the bilinear family",
                      "problem.family");
  }
  if ((c.kind == ExperimentKind::kScMin ||
       c.kind == ExperimentKind::kConvexMinPhased) &&
      c.family == "bilinear") {
    throw ConfigError("minimization kinds need a minimization family",
                      "problem.family");
  }
  if (!c.solver.empty() && c.solver != "sgd" && c.solver != "svrg" &&
      c.solver != "sarah" && c.solver != "gda" && c.solver != "extragradient" &&
      c.solver != "svrg_minimax") {
    throw ConfigError("unknown solver '" + c.solver + "'", "solver.kind");
  }
  if (!c.sweep_kind.empty()) {
    const ExperimentKind inner = experiment_kind_from_string(c.sweep_kind);
    if (inner == ExperimentKind::kStabilityProbe ||
        inner == ExperimentKind::kUtilitySweep) {
      throw ConfigError("sweep.kind must name a runnable experiment",
                        "sweep.kind");
    }
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

std::string config_echo(const RunConfig& c) {
  std::ostringstream out;
  out << "experiment.kind = " << to_string(c.kind) << "\n";
  out << "problem.family = " << c.family << "\n";
  out << "problem.n = " << c.n << "\n";
  out << "problem.d = " << c.dim << "\n";
  out << "problem.d_y = " << c.dim_y << "\n";
  out << "problem.mu = " << fmt(c.mu) << "\n";
  out << "problem.mu_x = " << fmt(c.mu_x) << "\n";
  out << "problem.mu_y = " << fmt(c.mu_y) << "\n";
  out << "problem.sample_radius = " << fmt(c.sample_radius) << "\n";
  out << "problem.mean_shift = " << fmt(c.mean_shift) << "\n";
  out << "problem.domain_radius = " << fmt(c.domain_radius) << "\n";
  out << "privacy.epsilon = " << fmt(c.epsilon) << "\n";
  out << "privacy.delta = " << (c.delta_auto ? "0" : fmt(c.delta)) << "\n";
  if (!c.solver.empty()) out << "solver.kind = " << c.solver << "\n";
  out << "solver.max_evals = " << c.solver_max_evals << "\n";
  out << "solver.budget_constant = " << fmt(c.budget_constant) << "\n";
  out << "run.seed = " << c.seed << "\n";
  out << "run.repetitions = " << c.repetitions << "\n";
  out << "run.out = " << c.out_dir << "\n";
  out << "run.no_noise = " << (c.no_noise ? "true" : "false") << "\n";
  out << "run.mu = " << fmt(c.mu_override) << "\n";
  out << "probe.trials = " << c.probe_trials << "\n";
  out << "probe.reg_mu = " << fmt(c.probe_reg_mu) << "\n";
  if (!c.probe_ns.empty()) {
    out << "probe.n_list = ";
    for (std::size_t i = 0; i < c.probe_ns.size(); ++i) {
      out << (i ? "," : "") << c.probe_ns[i];
    }
    out << "\n";
  }
  if (!c.sweep_n.empty()) {
    out << "sweep.n = ";
    for (std::size_t i = 0; i < c.sweep_n.size(); ++i) {
      out << (i ? "," : "") << c.sweep_n[i];
    }
    out << "\n";
  }
  if (!c.sweep_epsilon.empty()) {
    out << "sweep.epsilon = ";
    for (std::size_t i = 0; i < c.sweep_epsilon.size(); ++i) {
      out << (i ? "," : "") << fmt(c.sweep_epsilon[i]);
    }
    out << "\n";
  }
  out << "sweep.seeds = " << c.sweep_seeds << "\n";
  if (!c.sweep_kind.empty()) out << "sweep.kind = " << c.sweep_kind << "\n";
  out << "eval.holdout_factor = " << c.holdout_factor << "\n";
  return out.str();
}

}  // namespace dpopt
