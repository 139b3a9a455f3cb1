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

#include "dpopt/framework.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace dpopt {

double sc_min_sigma(double lipschitz, double mu, int n, double epsilon,
                    double delta) {
  return 4.0 * lipschitz * std::sqrt(2.0 * std::log(2.5 / delta)) /
         (mu * n * epsilon);
}

double sc_min_gamma(double lipschitz, double mu, int n, double delta) {
  return delta * delta * lipschitz * lipschitz /
         (32.0 * mu * static_cast<double>(n) * n);
}

double phased_min_sigma(double lipschitz, double mu_k, int block, double epsilon,
                        double delta) {
  return 4.0 * lipschitz * std::sqrt(2.0 * std::log(2.5 / delta)) /
         (mu_k * block * epsilon);
}

double phased_min_gamma(double lipschitz, double mu_k, int block, double delta) {
  return delta * delta * lipschitz * lipschitz /
         (32.0 * mu_k * static_cast<double>(block) * block);
}

double scsc_sigma(double lipschitz, double mu_side, double mu_min, int n,
                  double epsilon, double delta) {
  return 8.0 * lipschitz / (n * epsilon) *
         std::sqrt(2.0 * std::log(5.0 / delta) / (mu_side * mu_min));
}

double scsc_gamma(double lipschitz, double mu_min, int n, double delta) {
  return delta * lipschitz * lipschitz /
         (16.0 * mu_min * static_cast<double>(n) * n);
}

double cc_phase_sigma(double lipschitz, double mu_k, double mu, int block,
                      double epsilon, double delta) {
  return 8.0 * lipschitz / (block * epsilon) *
         std::sqrt(2.0 * std::log(5.0 / delta) / (mu_k * mu));
}

double cc_phase_gamma(double lipschitz, double mu, int block, double delta) {
  return delta * lipschitz * lipschitz /
         (16.0 * mu * static_cast<double>(block) * block);
}

double csc_phase_sigma(double lipschitz, double mu_k, double mu_y, int block,
                       double epsilon, double delta) {
  const double mu_min = std::min(mu_k, mu_y);
  return 4.0 * lipschitz / (block * epsilon) *
         std::sqrt(2.0 * std::log(2.5 / delta) / (mu_k * mu_min));
}

double csc_phase_gamma(double lipschitz, double mu_k, double mu_y, int block,
                       double delta) {
  const double mu_min = std::min(mu_k, mu_y);
  return delta * lipschitz * lipschitz /
         (8.0 * static_cast<double>(block) * block * mu_min);
}

double default_mu(double lipschitz, double radius, int n, int dim,
                  const PrivacyBudget& budget, const ScheduleMode& mode) {
  if (!(lipschitz > 0) || !(radius > 0) || n < 1 || dim < 1) {
    throw std::invalid_argument("default_mu: bad arguments");
  }
  const double ratio = lipschitz / radius;
  const double logn = std::log(static_cast<double>(n));
  switch (mode.kind) {
    case ScheduleKind::kConvexMin:
      return ratio *
             std::max(1.0 / std::sqrt(static_cast<double>(n)),
                      14.0 * logn * std::sqrt(dim * std::log(2.5 / budget.delta)) /
                          (n * budget.epsilon));
    case ScheduleKind::kConvexConcave:
      return ratio *
             std::max(2.0 / std::sqrt(static_cast<double>(n)),
                      13.0 * logn * std::sqrt(dim * std::log(5.0 / budget.delta)) /
                          (n * budget.epsilon));
    case ScheduleKind::kConvexStronglyConcave:
      return 3.0 * ratio *
             std::max(1.0 / std::sqrt(static_cast<double>(n)),
                      4.0 * logn * std::sqrt(dim * std::log(2.5 / budget.delta)) /
                          (n * budget.epsilon));
  }
  throw std::logic_error("default_mu: unknown mode");
}

PhaseSchedule make_phase_schedule(int n, double mu, double lipschitz,
                                  const PrivacyBudget& budget,
                                  const ScheduleMode& mode) {
  if (n < 4) {
    throw std::invalid_argument("make_phase_schedule: n must be >= 4");
  }
  if (!(mu > 0) || !(lipschitz > 0)) {
    throw std::invalid_argument("make_phase_schedule: mu and L must be > 0");
  }
  if (mode.kind == ScheduleKind::kConvexStronglyConcave && !(mode.mu_y > 0)) {
    throw std::invalid_argument("make_phase_schedule: C-SC mode needs mu_y > 0");
  }
  PhaseSchedule s;
  s.phases = std::bit_width(static_cast<unsigned>(n)) - 1;  // floor(log2 n)
  s.block_sizes = partition_sizes(n, s.phases);
  s.mu = mu;
  for (int k = 1; k <= s.phases; ++k) {
    const double mu_k = mu * std::ldexp(1.0, k);
    const int block = s.block_sizes[k - 1];
    s.mu_k.push_back(mu_k);
    switch (mode.kind) {
      case ScheduleKind::kConvexMin:
        s.sigma_k.push_back(phased_min_sigma(lipschitz, mu_k, block,
                                             budget.epsilon, budget.delta));
        s.gamma_k.push_back(phased_min_gamma(lipschitz, mu_k, block, budget.delta));
        break;
      case ScheduleKind::kConvexConcave:
        s.sigma_k.push_back(cc_phase_sigma(lipschitz, mu_k, mu, block,
                                           budget.epsilon, budget.delta));
        s.gamma_k.push_back(cc_phase_gamma(lipschitz, mu, block, budget.delta));
        break;
      case ScheduleKind::kConvexStronglyConcave:
        s.sigma_k.push_back(csc_phase_sigma(lipschitz, mu_k, mode.mu_y, block,
                                            budget.epsilon, budget.delta));
        s.gamma_k.push_back(
            csc_phase_gamma(lipschitz, mu_k, mode.mu_y, block, budget.delta));
        break;
    }
    if (!std::isfinite(s.sigma_k.back()) || !(s.sigma_k.back() > 0) ||
        !std::isfinite(s.gamma_k.back()) || !(s.gamma_k.back() > 0)) {
      throw std::runtime_error("make_phase_schedule: non-finite schedule entry");
    }
  }
  return s;
}

namespace {

std::string block_partition_id(int phase, int start, int size) {
  return "block:" + std::to_string(phase) + ":" + std::to_string(start) + "+" +
         std::to_string(size);
}

}  // namespace

DpRunOutput dp_sc_minimize(const MinProblem& problem, const PrivacyBudget& budget,
                           const MinSolverSpec& base, std::uint64_t seed,
                           const DpRunOptions& options) {
  if (!(problem.constants.strong > 0)) {
    throw std::invalid_argument("dp_sc_minimize: problem must be strongly convex");
  }
  const double lipschitz = problem.constants.lipschitz;
  const double mu = problem.constants.strong;
  const int n = problem.n();
  const SeedSplitter split(seed);

  MinSolverSpec spec = base;
  spec.target_gamma = sc_min_gamma(lipschitz, mu, n, budget.delta);
  spec.seed = split.derive("solver");
  MinSolveResult solved = solve_min(problem, spec);

  const bool noiseless = options.noise == NoiseMode::kNone;
  const double sigma =
      noiseless ? 0.0
                : sc_min_sigma(lipschitz, mu, n, budget.epsilon, budget.delta);
  RngStream noise = split.stream("noise");
  Eigen::VectorXd noised = add_gaussian_noise(solved.point, sigma, noise);

  DpRunOutput out;
  out.seed = seed;
  out.pre_noise_x = solved.point;
  out.x = noised;
  out.x_projected = project(problem.domain, noised);
  out.gradient_evals = solved.gradient_evals;
  out.ledger.append({"gaussian:x", budget, "full", CompositionKind::kSequential,
                     "", noiseless});
  PhaseTrace t;
  t.phase = 1;
  t.anchor = problem.domain.center;
  t.pre_noise = solved.point;
  t.noised = noised;
  t.noised_projected = *out.x_projected;
  t.sigma = sigma;
  t.gamma = spec.target_gamma;
  t.mu_k = mu;
  t.block_size = n;
  t.gradient_evals = solved.gradient_evals;
  out.trace.push_back(std::move(t));
  return out;
}

DpRunOutput dp_convex_minimize_phased(const MinProblem& problem,
                                      const PrivacyBudget& budget,
                                      const MinSolverSpec& base,
                                      std::uint64_t seed,
                                      const DpRunOptions& options) {
  const int n = problem.n();
  if (n < 4) {
    throw std::invalid_argument("dp_convex_minimize_phased: n must be >= 4");
  }
  const double lipschitz = problem.constants.lipschitz;
  const double mu =
      options.mu_override.value_or(default_mu(lipschitz, problem.domain.radius,
                                              n, problem.dimension(), budget,
                                              ScheduleMode::convex_min()));
  const PhaseSchedule schedule = make_phase_schedule(
      n, mu, lipschitz, budget, ScheduleMode::convex_min());
  const std::vector<SampleSet> blocks =
      partition_disjoint(problem.samples, schedule.phases);
  const SeedSplitter split(seed);
  const bool noiseless = options.noise == NoiseMode::kNone;

  DpRunOutput out;
  out.seed = seed;
  Eigen::VectorXd anchor = options.x0.value_or(problem.domain.center);
  if (anchor.size() != problem.dimension()) {
    throw std::invalid_argument("dp_convex_minimize_phased: x0 dimension");
  }
  int start = 0;
  for (int k = 1; k <= schedule.phases; ++k) {
    const MinProblem block_problem = problem.with_samples(blocks[k - 1]);
    QuadraticRegularizer reg{schedule.mu_k[k - 1], anchor};
    MinSolverSpec spec = base;
    spec.target_gamma = schedule.gamma_k[k - 1];
    spec.seed = split.derive("solver", static_cast<std::uint64_t>(k));
    MinSolveResult solved = solve_min(block_problem, spec, reg);

    const double sigma = noiseless ? 0.0 : schedule.sigma_k[k - 1];
    RngStream noise = split.stream("noise", static_cast<std::uint64_t>(k));
    Eigen::VectorXd noised = add_gaussian_noise(solved.point, sigma, noise);

    out.ledger.append({"gaussian:x:" + std::to_string(k), budget,
                       block_partition_id(k, start, blocks[k - 1].size()),
                       CompositionKind::kParallel, "phases", noiseless});
    PhaseTrace t;
    t.phase = k;
    t.anchor = anchor;
    t.pre_noise = solved.point;
    t.noised = noised;
    t.noised_projected = project(problem.domain, noised);
    t.sigma = sigma;
    t.gamma = spec.target_gamma;
    t.mu_k = schedule.mu_k[k - 1];
    t.block_size = blocks[k - 1].size();
    t.gradient_evals = solved.gradient_evals;
    out.trace.push_back(t);
    out.gradient_evals += solved.gradient_evals;
    start += blocks[k - 1].size();
    if (k == schedule.phases) {
      out.pre_noise_x = solved.point;
      out.x = noised;
      out.x_projected = t.noised_projected;
    } else {
      anchor = std::move(noised);
    }
  }
  return out;
}

DpRunOutput dp_scsc_saddle(const MinimaxProblem& problem,
                           const PrivacyBudget& budget,
                           const MinimaxSolverSpec& base, std::uint64_t seed,
                           const DpRunOptions& options) {
  if (!(problem.constants.mu_x > 0) || !(problem.constants.mu_y > 0)) {
    throw std::invalid_argument("dp_scsc_saddle: problem must be SC-SC");
  }
  const double lipschitz = problem.constants.lipschitz;
  const double mu_min = std::min(problem.constants.mu_x, problem.constants.mu_y);
  const int n = problem.n();
  const SeedSplitter split(seed);

  MinimaxSolverSpec spec = base;
  spec.target_gamma = scsc_gamma(lipschitz, mu_min, n, budget.delta);
  spec.seed = split.derive("solver");
  SaddleResult solved = solve_saddle(problem, spec);

  const bool noiseless = options.noise == NoiseMode::kNone;
  const double sigma_x =
      noiseless ? 0.0
                : scsc_sigma(lipschitz, problem.constants.mu_x, mu_min, n,
                             budget.epsilon, budget.delta);
  const double sigma_y =
      noiseless ? 0.0
                : scsc_sigma(lipschitz, problem.constants.mu_y, mu_min, n,
                             budget.epsilon, budget.delta);
  RngStream noise_x = split.stream("noise_x");
  RngStream noise_y = split.stream("noise_y");
  Eigen::VectorXd xt = add_gaussian_noise(solved.x, sigma_x, noise_x);
  Eigen::VectorXd yt = add_gaussian_noise(solved.y, sigma_y, noise_y);

  DpRunOutput out;
  out.seed = seed;
  out.pre_noise_x = solved.x;
  out.pre_noise_y = solved.y;
  out.x = xt;
  out.y = yt;
  out.x_projected = project(problem.domain_x, xt);
  out.y_projected = project(problem.domain_y, yt);
  out.gradient_evals = solved.gradient_evals;
  out.ledger.append({"gaussian:x", budget.half(), "full",
                     CompositionKind::kSequential, "", noiseless});
  out.ledger.append({"gaussian:y", budget.half(), "full",
                     CompositionKind::kSequential, "", noiseless});

  PhaseTrace tx;
  tx.phase = 1;
  tx.variable = 'x';
  tx.anchor = problem.domain_x.center;
  tx.pre_noise = solved.x;
  tx.noised = xt;
  tx.noised_projected = *out.x_projected;
  tx.sigma = sigma_x;
  tx.gamma = spec.target_gamma;
  tx.mu_k = problem.constants.mu_x;
  tx.block_size = n;
  tx.gradient_evals = solved.gradient_evals;
  out.trace.push_back(std::move(tx));
  PhaseTrace ty;
  ty.phase = 1;
  ty.variable = 'y';
  ty.anchor = problem.domain_y.center;
  ty.pre_noise = solved.y;
  ty.noised = yt;
  ty.noised_projected = *out.y_projected;
  ty.sigma = sigma_y;
  ty.gamma = spec.target_gamma;
  ty.mu_k = problem.constants.mu_y;
  ty.block_size = n;
  out.trace.push_back(std::move(ty));
  return out;
}

namespace {

// Shared phased loop for the convex-concave primal/dual halves and the
// C-SC variant. `perturb_x` selects which block carries the anchor
// regularizer and the noise.
DpRunOutput phased_saddle(const MinimaxProblem& problem,
                          const PrivacyBudget& budget,
                          const MinimaxSolverSpec& base, std::uint64_t seed,
                          const DpRunOptions& options, bool perturb_x,
                          const ScheduleMode& mode, const char* who) {
  const int n = problem.n();
  if (n < 4) {
    throw std::invalid_argument(std::string(who) + ": n must be >= 4");
  }
  const double lipschitz = problem.constants.lipschitz;
  const bool csc = mode.kind == ScheduleKind::kConvexStronglyConcave;
  const BallDomain& perturbed_domain =
      perturb_x ? problem.domain_x : problem.domain_y;
  const BallDomain& other_domain =
      perturb_x ? problem.domain_y : problem.domain_x;
  // D bounds the norms over both domains in the utility theorems.
  const double radius_bound =
      std::max(problem.domain_x.radius + problem.domain_x.center.norm(),
               problem.domain_y.radius + problem.domain_y.center.norm());

  const int dim_for_mu =
      csc ? problem.dx() : std::max(problem.dx(), problem.dy());
  const double mu = options.mu_override.value_or(
      default_mu(lipschitz, radius_bound, n, dim_for_mu, budget, mode));
  const PhaseSchedule schedule =
      make_phase_schedule(n, mu, lipschitz, budget, mode);
  const std::vector<SampleSet> blocks =
      partition_disjoint(problem.samples, schedule.phases);
  const SeedSplitter split(seed);
  const bool noiseless = options.noise == NoiseMode::kNone;
  // Phases of the half-algorithms are (eps/2, delta/2)-DP; C-SC phases
  // spend the full budget.
  const PrivacyBudget entry_budget = csc ? budget : budget.half();

  DpRunOutput out;
  out.seed = seed;
  Eigen::VectorXd anchor = perturb_x
                               ? options.x0.value_or(problem.domain_x.center)
                               : options.y0.value_or(problem.domain_y.center);
  if (anchor.size() != perturbed_domain.dimension()) {
    throw std::invalid_argument(std::string(who) + ": initializer dimension");
  }
  int start = 0;
  for (int k = 1; k <= schedule.phases; ++k) {
    const MinimaxProblem block_problem = problem.with_samples(blocks[k - 1]);
    ProxRegularizer reg;
    if (perturb_x) {
      reg.mu_x_reg = schedule.mu_k[k - 1];
      reg.anchor_x = anchor;
      reg.mu_y_reg = csc ? 0.0 : mu;
      reg.anchor_y = other_domain.center;
    } else {
      reg.mu_y_reg = schedule.mu_k[k - 1];
      reg.anchor_y = anchor;
      reg.mu_x_reg = mu;
      reg.anchor_x = other_domain.center;
    }
    MinimaxSolverSpec spec = base;
    spec.target_gamma = schedule.gamma_k[k - 1];
    spec.seed = split.derive("solver", static_cast<std::uint64_t>(k));
    SaddleResult solved = solve_saddle(block_problem, spec, reg);

    const double sigma = noiseless ? 0.0 : schedule.sigma_k[k - 1];
    RngStream noise = split.stream("noise", static_cast<std::uint64_t>(k));
    const Eigen::VectorXd& pre = perturb_x ? solved.x : solved.y;
    Eigen::VectorXd noised = add_gaussian_noise(pre, sigma, noise);

    out.ledger.append({std::string("gaussian:") + (perturb_x ? "x:" : "y:") +
                           std::to_string(k),
                       entry_budget,
                       block_partition_id(k, start, blocks[k - 1].size()),
                       CompositionKind::kParallel,
                       perturb_x ? "primal_phases" : "dual_phases", noiseless});
    PhaseTrace t;
    t.phase = k;
    t.variable = perturb_x ? 'x' : 'y';
    t.anchor = anchor;
    t.pre_noise = pre;
    t.noised = noised;
    t.noised_projected = project(perturbed_domain, noised);
    t.sigma = sigma;
    t.gamma = spec.target_gamma;
    t.mu_k = schedule.mu_k[k - 1];
    t.block_size = blocks[k - 1].size();
    t.gradient_evals = solved.gradient_evals;
    out.trace.push_back(t);
    out.gradient_evals += solved.gradient_evals;
    start += blocks[k - 1].size();
    if (k == schedule.phases) {
      if (perturb_x) {
        out.pre_noise_x = pre;
        out.x = noised;
        out.x_projected = t.noised_projected;
      } else {
        out.pre_noise_y = pre;
        out.y = noised;
        out.y_projected = t.noised_projected;
      }
    } else {
      anchor = std::move(noised);
    }
  }
  return out;
}

}  // namespace

DpRunOutput dp_cc_saddle_primal(const MinimaxProblem& problem,
                                const PrivacyBudget& budget,
                                const MinimaxSolverSpec& base,
                                std::uint64_t seed,
                                const DpRunOptions& options) {
  return phased_saddle(problem, budget, base, seed, options, /*perturb_x=*/true,
                       ScheduleMode::convex_concave(), "dp_cc_saddle_primal");
}

DpRunOutput dp_cc_saddle_dual(const MinimaxProblem& problem,
                              const PrivacyBudget& budget,
                              const MinimaxSolverSpec& base, std::uint64_t seed,
                              const DpRunOptions& options) {
  return phased_saddle(problem, budget, base, seed, options, /*perturb_x=*/false,
                       ScheduleMode::convex_concave(), "dp_cc_saddle_dual");
}

DpRunOutput dp_cc_saddle(const MinimaxProblem& problem,
                         const PrivacyBudget& budget,
                         const MinimaxSolverSpec& base, std::uint64_t seed,
                         const DpRunOptions& options) {
  const SeedSplitter split(seed);
  DpRunOutput primal = dp_cc_saddle_primal(problem, budget, base,
                                           split.derive("primal"), options);
  DpRunOutput dual =
      dp_cc_saddle_dual(problem, budget, base, split.derive("dual"), options);

  DpRunOutput out;
  out.seed = seed;
  out.x = primal.x;
  out.x_projected = primal.x_projected;
  out.pre_noise_x = primal.pre_noise_x;
  out.y = dual.y;
  out.y_projected = dual.y_projected;
  out.pre_noise_y = dual.pre_noise_y;
  out.ledger = primal.ledger;
  out.ledger.extend(dual.ledger);
  out.trace = primal.trace;
  out.trace.insert(out.trace.end(), dual.trace.begin(), dual.trace.end());
  out.gradient_evals = primal.gradient_evals + dual.gradient_evals;
  return out;
}

DpRunOutput dp_csc_saddle(const MinimaxProblem& problem,
                          const PrivacyBudget& budget,
                          const MinimaxSolverSpec& base, std::uint64_t seed,
                          const DpRunOptions& options) {
  const double mu_y = problem.constants.mu_y;
  const double radius_bound =
      std::max(problem.domain_x.radius + problem.domain_x.center.norm(),
               problem.domain_y.radius + problem.domain_y.center.norm());
  const double threshold =
      problem.constants.lipschitz /
      (radius_bound * std::sqrt(static_cast<double>(problem.n())));
  if (!(mu_y >= threshold)) {
    throw RoutingError(
        "dp_csc_saddle: mu_y below L/(D sqrt(n)); use dp_cc_saddle instead");
  }
  return phased_saddle(problem, budget, base, seed, options, /*perturb_x=*/true,
                       ScheduleMode::csc(mu_y), "dp_csc_saddle");
}

}  // namespace dpopt
