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

#include "dpopt/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dpopt {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) out << (i ? " " : "") << fmt(v[i]);
}

QuadraticFamily quadratic_family(const RunConfig& c) {
  QuadraticFamily f;
  f.dim = c.dim;
  f.mu = c.mu;
  f.sample_radius = c.sample_radius;
  f.population_mean = Eigen::VectorXd::Constant(c.dim, c.mean_shift);
  f.domain_radius = c.domain_radius;
  return f;
}

LogisticFamily logistic_family(const RunConfig& c) {
  LogisticFamily f;
  f.dim = c.dim;
  f.feature_radius = c.sample_radius;
  f.ridge = c.mu;
  f.domain_radius = c.domain_radius;
  return f;
}

BilinearFamily bilinear_family(const RunConfig& c) {
  BilinearFamily f;
  f.dx = c.dim;
  f.dy = c.dim_y > 0 ? c.dim_y : c.dim;
  f.mu_x = c.mu_x;
  f.mu_y = c.mu_y;
  f.b_mean = Eigen::VectorXd::Constant(f.dy, c.mean_shift);
  f.noise_scale = 0.25 * c.sample_radius;
  f.domain_radius_x = c.domain_radius;
  f.domain_radius_y = c.domain_radius;
  return f;
}

MinSolverKind min_solver_kind(const std::string& name) {
  if (name == "sgd") return MinSolverKind::kSgd;
  if (name == "sarah") return MinSolverKind::kSarah;
  return MinSolverKind::kSvrg;
}

MinimaxSolverKind minimax_solver_kind(const std::string& name) {
  if (name == "gda") return MinimaxSolverKind::kGda;
  if (name == "extragradient") return MinimaxSolverKind::kExtragradient;
  return MinimaxSolverKind::kSvrgMinimax;
}

std::string resolved_solver(const RunConfig& c, ExperimentKind kind) {
  if (!c.solver.empty()) return c.solver;
  switch (kind) {
    case ExperimentKind::kScMin:
    case ExperimentKind::kConvexMinPhased:
      return "svrg";
    case ExperimentKind::kScScSaddle:
      return "extragradient";
    default:
      return "svrg_minimax";
  }
}

struct SingleRun {
  UtilityRecord record;
  DpRunOutput output;
};

// One private run at the given kind and seed, with metrics against the
// family's exact population quantities.
SingleRun run_single(const RunConfig& c, ExperimentKind kind,
                     std::uint64_t seed, int repetition) {
  SingleRun out;
  UtilityRecord& r = out.record;
  r.kind = to_string(kind);
  r.family = c.family;
  r.n = c.n;
  r.dim = c.dim;
  r.epsilon = c.epsilon;
  r.delta = c.delta;
  r.seed = seed;
  r.repetition = repetition;
  r.solver = resolved_solver(c, kind);

  const PrivacyBudget budget(c.epsilon, c.delta);
  DpRunOptions options;
  options.noise = c.no_noise ? NoiseMode::kNone : NoiseMode::kPrivate;
  if (c.mu_override > 0) options.mu_override = c.mu_override;

  const SeedSplitter split(seed);
  RngStream data = split.stream("data");
  const auto start = std::chrono::steady_clock::now();

  if (kind == ExperimentKind::kScMin ||
      kind == ExperimentKind::kConvexMinPhased) {
    MinSolverSpec base;
    base.kind = min_solver_kind(r.solver);
    base.budget_constant = c.budget_constant;
    base.max_gradient_evals = c.solver_max_evals;

    if (c.family == "quadratic") {
      QuadraticFamily family = quadratic_family(c);
      MinProblem problem = family.draw_problem(c.n, data);
      out.output = kind == ExperimentKind::kScMin
                       ? dp_sc_minimize(problem, budget, base, seed, options)
                       : dp_convex_minimize_phased(problem, budget, base, seed,
                                                   options);
      const Eigen::VectorXd& xp = *out.output.x_projected;
      const Eigen::VectorXd opt = exact_min_quadratic(problem).x;
      r.excess_empirical_risk =
          empirical_value(problem, xp) - empirical_value(problem, opt);
      r.excess_population_risk = family.population_excess_risk(xp);
    } else if (c.family == "logistic") {
      LogisticFamily family = logistic_family(c);
      MinProblem problem = family.draw_problem(c.n, data);
      if (kind == ExperimentKind::kScMin && !(problem.constants.strong > 0)) {
        throw ConfigError("sc_min on logistic requires ridge mu > 0",
                          "problem.mu");
      }
      out.output = kind == ExperimentKind::kScMin
                       ? dp_sc_minimize(problem, budget, base, seed, options)
                       : dp_convex_minimize_phased(problem, budget, base, seed,
                                                   options);
      RngStream holdout_stream = split.stream("holdout");
      const SampleSet holdout =
          family.draw(c.holdout_factor * c.n, holdout_stream);
      r.excess_population_risk =
          excess_population_risk(family, *out.output.x_projected, holdout, c.n)
              .value;
    } else {
      throw ConfigError("minimization kinds need a minimization family",
                        "problem.family");
    }
  } else {
    BilinearFamily family = bilinear_family(c);
    MinimaxProblem problem = family.draw_problem(c.n, data);
    MinimaxSolverSpec base;
    base.kind = minimax_solver_kind(r.solver);
    base.budget_constant = c.budget_constant;
    base.max_gradient_evals = c.solver_max_evals;

    switch (kind) {
      case ExperimentKind::kScScSaddle:
        out.output = dp_scsc_saddle(problem, budget, base, seed, options);
        break;
      case ExperimentKind::kCcSaddle:
        out.output = dp_cc_saddle(problem, budget, base, seed, options);
        break;
      case ExperimentKind::kCscSaddle:
        out.output = dp_csc_saddle(problem, budget, base, seed, options);
        break;
      default:
        throw std::logic_error("run_single: unexpected kind");
    }
    if (out.output.x_projected && out.output.y_projected) {
      r.empirical_gap = duality_gap_exact(problem, *out.output.x_projected,
                                          *out.output.y_projected);
      r.weak_gap =
          weak_gap_estimate(family, *out.output.x_projected, *out.output.y_projected);
    } else if (out.output.x_projected) {
      // Primal-only outputs (C-SC): report the population primal excess.
      r.excess_population_risk =
          family.population_primal_excess(*out.output.x_projected);
    }
  }

  const auto end = std::chrono::steady_clock::now();
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  r.gradient_evals = out.output.gradient_evals;
  return out;
}

std::string probe_report(const RunConfig& c) {
  std::ostringstream out;
  std::vector<int> ns = c.probe_ns.empty() ? std::vector<int>{c.n} : c.probe_ns;
  out << "stability probe: family=" << c.family
      << " trials=" << c.probe_trials;
  if (c.probe_reg_mu > 0) out << " reg_mu=" << fmt(c.probe_reg_mu);
  out << "\n";
  int violations = 0;
  const SeedSplitter split(c.seed);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    RngStream stream = split.stream("probe", i);
    StabilityReport report;
    if (c.family == "quadratic") {
      std::optional<double> reg;
      if (c.probe_reg_mu > 0) reg = c.probe_reg_mu;
      report =
          stability_probe_min(quadratic_family(c), ns[i], c.probe_trials, stream, reg);
    } else if (c.family == "bilinear") {
      std::optional<std::pair<double, double>> reg;
      if (c.probe_reg_mu > 0) reg = std::make_pair(c.probe_reg_mu, c.probe_reg_mu);
      report = stability_probe_minimax(bilinear_family(c), ns[i], c.probe_trials,
                                       stream, reg);
    } else {
      throw NotSupportedError("stability probe: no exact oracle for family " +
                              c.family);
    }
    violations += report.violations;
    out << "n=" << ns[i] << " max_observed=" << fmt(report.max_observed)
        << " bound=" << fmt(report.bound) << " violations=" << report.violations
        << " " << (report.violations == 0 ? "PASS" : "FAIL") << "\n";
  }
  out << (violations == 0 ? "PROBE PASS" : "PROBE FAIL") << "\n";
  return out.str();
}

}  // namespace

std::string serialize_run_record(const DpRunOutput& output,
                                 const RunConfig& config, int repetition) {
  std::ostringstream out;
  out << "dpopt-run-record v1\n";
  out << "seed = " << output.seed << "\n";
  out << "repetition = " << repetition << "\n";
  out << "gradient_evals = " << output.gradient_evals << "\n";
  out << "[config]\n" << config_echo(config);
  out << "[ledger]\n" << output.ledger.serialize();
  const PrivacyTotal total = output.ledger.total();
  out << "ledger_total = " << fmt(total.epsilon) << "," << fmt(total.delta)
      << (total.non_private ? ",NON-PRIVATE" : "") << "\n";
  out << "[trace]\n";
  for (const PhaseTrace& t : output.trace) {
    out << "phase " << t.phase << " var=" << t.variable
        << " block=" << t.block_size << " mu_k=" << fmt(t.mu_k)
        << " gamma=" << fmt(t.gamma) << " sigma=" << fmt(t.sigma)
        << " evals=" << t.gradient_evals << "\n";
    out << "  anchor ";
    write_vector(out, t.anchor);
    out << "\n  pre_noise ";
    write_vector(out, t.pre_noise);
    out << "\n  noised ";
    write_vector(out, t.noised);
    out << "\n  noised_projected ";
    write_vector(out, t.noised_projected);
    out << "\n";
  }
  out << "[output]\n";
  auto emit = [&](const char* label, const std::optional<Eigen::VectorXd>& v) {
    if (!v) return;
    out << label << " ";
    write_vector(out, *v);
    out << "\n";
  };
  emit("x", output.x);
  emit("x_projected", output.x_projected);
  emit("pre_noise_x", output.pre_noise_x);
  emit("y", output.y);
  emit("y_projected", output.y_projected);
  emit("pre_noise_y", output.pre_noise_y);
  return out.str();
}

std::string RunnerResult::records_csv() const {
  std::ostringstream out;
  out << kUtilityCsvHeader << "\n";
  for (const UtilityRecord& r : records) write_utility_csv_row(out, r);
  return out.str();
}

std::string RunnerResult::records_jsonl() const {
  std::ostringstream out;
  for (const UtilityRecord& r : records) write_utility_jsonl_row(out, r);
  return out.str();
}

std::string RunnerResult::aggregate_csv() const {
  std::ostringstream out;
  out << kAggregateCsvHeader << "\n";
  for (const UtilityAggregate& a : aggregates) write_aggregate_csv_row(out, a);
  return out.str();
}

RunnerResult run_experiment(const RunConfig& config, int jobs) {
  RunnerResult result;
  const SeedSplitter split(config.seed);

  if (config.kind == ExperimentKind::kStabilityProbe) {
    result.probe_text = probe_report(config);
    result.probe_violations =
        result.probe_text.find("PROBE PASS") == std::string::npos ? 1 : 0;
    return result;
  }

  if (config.kind == ExperimentKind::kUtilitySweep) {
    std::string inner_name = config.sweep_kind;
    if (inner_name.empty()) {
      inner_name = config.family == "bilinear" ? "cc_saddle" : "convex_min_phased";
    }
    const ExperimentKind inner = experiment_kind_from_string(inner_name);
    const std::vector<int> ns =
        config.sweep_n.empty() ? std::vector<int>{config.n} : config.sweep_n;
    const std::vector<double> epsilons = config.sweep_epsilon.empty()
                                             ? std::vector<double>{config.epsilon}
                                             : config.sweep_epsilon;
    struct Cell {
      RunConfig config;
      std::string seed_label;
    };
    std::vector<Cell> cells;
    for (int n : ns) {
      for (double eps : epsilons) {
        RunConfig cell = config;
        cell.kind = inner;
        cell.n = n;
        cell.epsilon = eps;
        if (config.delta_auto) cell.delta = 0.5 / n;
        if (!(cell.delta > 0) || !(cell.delta < 1.0 / n)) {
          throw ConfigError("delta must lie in (0, 1/n) for every sweep point",
                            "privacy.delta");
        }
        // Seeds depend on n and the repetition only, so epsilon points are
        // matched-seed comparisons.
        cells.push_back({std::move(cell), "sweep:n=" + std::to_string(n)});
      }
    }
    result.records = utility_sweep(
        static_cast<int>(cells.size()), config.sweep_seeds, jobs,
        [&](int config_index, int repetition) {
          const Cell& cell = cells[config_index];
          const std::uint64_t seed = split.derive(cell.seed_label, repetition);
          try {
            return run_single(cell.config, cell.config.kind, seed, repetition)
                .record;
          } catch (const std::exception& e) {
            UtilityRecord failed;
            failed.kind = to_string(cell.config.kind);
            failed.family = cell.config.family;
            failed.n = cell.config.n;
            failed.dim = cell.config.dim;
            failed.epsilon = cell.config.epsilon;
            failed.delta = cell.config.delta;
            failed.solver = resolved_solver(cell.config, cell.config.kind);
            failed.seed = seed;
            failed.repetition = repetition;
            failed.status = std::string("failed: ") + e.what();
            return failed;
          }
        });
    result.aggregates = aggregate_records(result.records);
    return result;
  }

  // Single-run kinds, `repetitions` times.
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t seed =
        config.repetitions == 1 ? config.seed : split.derive("rep", rep);
    SingleRun run = run_single(config, config.kind, seed, rep);
    result.run_records.push_back(serialize_run_record(run.output, config, rep));
    result.records.push_back(std::move(run.record));
  }
  return result;
}

std::vector<std::string> write_artifacts(const RunnerResult& result,
                                         const RunConfig& config,
                                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    written.push_back(path.string());
  };

  if (!result.probe_text.empty()) {
    write_file("probe.txt", result.probe_text);
  }
  if (!result.records.empty()) {
    write_file("records.csv", result.records_csv());
    write_file("records.jsonl", result.records_jsonl());
  }
  if (!result.aggregates.empty()) {
    write_file("aggregate.csv", result.aggregate_csv());
  }
  for (std::size_t i = 0; i < result.run_records.size(); ++i) {
    write_file("run_" + std::to_string(i) + ".txt", result.run_records[i]);
  }
  if (config.kind != ExperimentKind::kStabilityProbe) {
    write_file("config_echo.txt", config_echo(config));
  }
  return written;
}

}  // namespace dpopt
