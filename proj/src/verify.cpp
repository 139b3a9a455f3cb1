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

#include "dpopt/verify.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "dpopt/evaluation.hpp"
#include "dpopt/framework.hpp"
#include "dpopt/runner.hpp"

namespace dpopt {
namespace {

struct Harness {
  std::ostream& out;
  int failures = 0;

  void row(const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!pass) ++failures;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void check_noise_calibration(Harness& h, const VerifyOptions& opt) {
  SeedSplitter split(opt.seed);
  RngStream stream = split.stream("calibration");
  double worst_rel = 0;
  const int formula_trials = opt.quick ? 500 : 1000;
  for (int t = 0; t < formula_trials; ++t) {
    const double sensitivity = stream.uniform(1e-3, 10.0);
    const double eps = stream.uniform(0.05, 0.95);
    const double delta = stream.uniform(1e-8, 0.1);
    const double got = gaussian_sigma(sensitivity, eps, delta);
    const double want = sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / eps;
    worst_rel = std::max(worst_rel, std::abs(got - want) / want);
  }
  const bool formula_ok = worst_rel <= 1e-12;

  const int draws = opt.quick ? 50000 : 100000;
  const double sigma = 1.7 * opt.sigma_mutation;
  RngStream noise = split.stream("noise");
  double sum = 0, sum2 = 0;
  for (int i = 0; i < draws; ++i) {
    const double z = add_gaussian_noise(Eigen::VectorXd::Zero(1), sigma, noise)[0];
    sum += z;
    sum2 += z * z;
  }
  const double std_hat = std::sqrt(sum2 / draws - (sum / draws) * (sum / draws));
  const bool std_ok = std::abs(std_hat - 1.7) <= 0.02 * 1.7;
  h.row("noise-calibration", formula_ok && std_ok,
        "max formula rel err " + num(worst_rel) + ", empirical std " +
            num(std_hat) + " vs 1.7");
}

void check_ledger(Harness& h) {
  bool ok = true;
  std::string detail;
  {
    PrivacyLedger ledger;
    ledger.append({"a", PrivacyBudget(0.3, 1e-5), "full",
                   CompositionKind::kSequential, "", false});
    ledger.append({"b", PrivacyBudget(0.2, 1e-5), "full",
                   CompositionKind::kSequential, "", false});
    const PrivacyTotal total = ledger.total();
    ok = ok && std::abs(total.epsilon - 0.5) < 1e-15 &&
         std::abs(total.delta - 2e-5) < 1e-20;
  }
  {
    PrivacyLedger ledger;
    for (int k = 0; k < 4; ++k) {
      ledger.append({"p" + std::to_string(k), PrivacyBudget(0.4, 1e-5),
                     "block" + std::to_string(k), CompositionKind::kParallel,
                     "phases", false});
    }
    const PrivacyTotal total = ledger.total();
    ok = ok && std::abs(total.epsilon - 0.4) < 1e-15;
  }
  {
    PrivacyLedger ledger;
    ledger.append({"p0", PrivacyBudget(0.4, 1e-5), "same",
                   CompositionKind::kParallel, "phases", false});
    ledger.append({"p1", PrivacyBudget(0.4, 1e-5), "same",
                   CompositionKind::kParallel, "phases", false});
    bool threw = false;
    try {
      ledger.total();
    } catch (const LedgerViolation&) {
      threw = true;
    }
    ok = ok && threw;
    detail = threw ? "sum/max/overlap-rejection all hold"
                   : "overlap not rejected";
  }
  h.row("composition-ledger", ok, detail);
}

void check_stability(Harness& h, const VerifyOptions& opt) {
  SeedSplitter split(opt.seed);
  const int trials = opt.quick ? 50 : 100;
  QuadraticFamily qf;
  RngStream s1 = split.stream("stab-min");
  const StabilityReport min_report = stability_probe_min(qf, 40, trials, s1);
  h.row("erm-stability-min", min_report.violations == 0,
        "max shift " + num(min_report.max_observed) + " bound " +
            num(min_report.bound));

  BilinearFamily bf;
  RngStream s2 = split.stream("stab-minimax");
  const StabilityReport mm = stability_probe_minimax(bf, 40, trials, s2);
  h.row("erm-stability-minimax", mm.violations == 0,
        "max weighted shift " + num(mm.max_observed) + " bound " +
            num(mm.bound));
}

void check_prox_and_gap(Harness& h, const VerifyOptions& opt) {
  SeedSplitter split(opt.seed);
  RngStream stream = split.stream("prox-gap");
  BilinearFamily bf;
  const int pairs = opt.quick ? 100 : 200;
  MinimaxProblem problem = bf.draw_problem(24, stream);
  int prox_violations = 0;
  for (int t = 0; t < pairs; ++t) {
    ProxRegularizer r1, r2;
    r1.mu_x_reg = r2.mu_x_reg = stream.uniform(0.5, 3.0);
    r1.mu_y_reg = r2.mu_y_reg = stream.uniform(0.5, 3.0);
    r1.anchor_x = stream.uniform_ball(bf.dx, 1.0);
    r1.anchor_y = stream.uniform_ball(bf.dy, 1.0);
    r2.anchor_x = stream.uniform_ball(bf.dx, 1.0);
    r2.anchor_y = stream.uniform_ball(bf.dy, 1.0);
    const OracleSolution s1 = exact_saddle_bilinear(problem, r1);
    const OracleSolution s2 = exact_saddle_bilinear(problem, r2);
    const double lhs = r1.mu_x_reg * (s1.x - s2.x).squaredNorm() +
                       r1.mu_y_reg * (*s1.y - *s2.y).squaredNorm();
    const double rhs = r1.mu_x_reg * (r1.anchor_x - r2.anchor_x).squaredNorm() +
                       r1.mu_y_reg * (r1.anchor_y - r2.anchor_y).squaredNorm();
    if (lhs > rhs + 1e-9) ++prox_violations;
  }
  h.row("prox-nonexpansive", prox_violations == 0,
        std::to_string(pairs) + " anchor pairs, " +
            std::to_string(prox_violations) + " violations");

  const int perturbations = opt.quick ? 200 : 400;
  const OracleSolution saddle = exact_saddle_bilinear(problem);
  const double ell = problem.constants.smooth;
  const double kx = ell / problem.constants.mu_x;
  const double ky = ell / problem.constants.mu_y;
  int gap_violations = 0;
  for (int t = 0; t < perturbations; ++t) {
    const Eigen::VectorXd x = saddle.x + stream.uniform_ball(bf.dx, 0.5);
    const Eigen::VectorXd y = *saddle.y + stream.uniform_ball(bf.dy, 0.5);
    const double gap = duality_gap_exact(problem, x, y);
    const double dx2 = (x - saddle.x).squaredNorm();
    const double dy2 = (y - *saddle.y).squaredNorm();
    const double lower =
        0.5 * problem.constants.mu_x * dx2 + 0.5 * problem.constants.mu_y * dy2;
    const double upper = 0.5 * (ky + 1) * ell * dx2 + 0.5 * (kx + 1) * ell * dy2;
    if (gap < lower - 1e-9 || gap > upper + 1e-9) ++gap_violations;
  }
  h.row("gap-sandwich", gap_violations == 0,
        std::to_string(perturbations) + " perturbations, " +
            std::to_string(gap_violations) + " violations");
}

void check_oracle_equivalence(Harness& h, const VerifyOptions& opt) {
  SeedSplitter split(opt.seed);
  RngStream stream = split.stream("oracle-eq");
  const int instances = opt.quick ? 3 : 5;

  bool min_ok = true;
  QuadraticFamily qf;
  for (int t = 0; t < instances; ++t) {
    MinProblem problem = qf.draw_problem(50, stream);
    MinSolverSpec spec;
    spec.kind = MinSolverKind::kSvrg;
    spec.target_gamma = 1e-10;
    spec.seed = split.derive("svrg", t);
    const Eigen::VectorXd opt_point = exact_min_quadratic(problem).x;
    const MinSolveResult res = solve_min(problem, spec, std::nullopt, &opt_point);
    const double subopt =
        empirical_value(problem, res.point) - empirical_value(problem, opt_point);
    min_ok = min_ok && subopt <= 1e-10 &&
             *res.certificate <= 10.0 * std::sqrt(2e-10 / qf.mu);
  }
  bool saddle_ok = true;
  BilinearFamily bf;
  for (int t = 0; t < instances; ++t) {
    MinimaxProblem problem = bf.draw_problem(30, stream);
    MinimaxSolverSpec spec;
    spec.kind = MinimaxSolverKind::kExtragradient;
    spec.target_gamma = 1e-10;
    spec.seed = split.derive("eg", t);
    const OracleSolution saddle = exact_saddle_bilinear(problem);
    const SaddleResult res = solve_saddle(problem, spec, std::nullopt, &saddle);
    saddle_ok = saddle_ok && *res.certificate <= 10.0 * 2e-10;
  }
  h.row("base-solver-oracle-equivalence", min_ok && saddle_ok,
        std::to_string(instances) + " quadratic + " + std::to_string(instances) +
            " bilinear instances at gamma=1e-10");
}

void check_schedule(Harness& h) {
  bool ok = true;
  for (int n : {16, 100}) {
    const PhaseSchedule s = make_phase_schedule(
        n, 1.0, 1.0, PrivacyBudget(0.5, 1e-3), ScheduleMode::convex_min());
    int total = 0;
    for (int b : s.block_sizes) total += b;
    ok = ok && total == n;
    for (int k = 1; k <= s.phases; ++k) {
      ok = ok && std::abs(s.mu_k[k - 1] - std::ldexp(1.0, k)) < 1e-12;
    }
    ok = ok && s.phases == static_cast<int>(std::floor(std::log2(n)));
  }
  h.row("phase-schedule", ok, "K, mu_k doubling and block cover for n=16,100");
}

void check_determinism(Harness& h) {
  RunConfig config;
  config.kind = ExperimentKind::kScMin;
  config.family = "quadratic";
  config.n = 60;
  config.dim = 2;
  config.seed = 7;
  config.delta = 1e-3;
  config.delta_auto = false;
  auto strip_wall = [](std::string csv) {
    std::string out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
      out += line.substr(0, line.rfind(',')) + "\n";
    }
    return out;
  };
  const RunnerResult a = run_experiment(config);
  const RunnerResult b = run_experiment(config);
  const bool ok = strip_wall(a.records_csv()) == strip_wall(b.records_csv()) &&
                  a.run_records == b.run_records;
  h.row("determinism", ok, "identical config+seed reproduces outputs");
}

}  // namespace

int run_verify(std::ostream& out, const VerifyOptions& options) {
  Harness h{out};
  check_noise_calibration(h, options);
  check_ledger(h);
  check_stability(h, options);
  check_prox_and_gap(h, options);
  check_oracle_equivalence(h, options);
  check_schedule(h);
  check_determinism(h);
  out << (h.failures == 0 ? "VERIFY PASS" : "VERIFY FAIL") << " ("
      << h.failures << " failing rows)\n";
  return h.failures;
}

}  // namespace dpopt
