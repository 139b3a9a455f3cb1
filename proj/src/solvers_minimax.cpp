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

#include "dpopt/solvers_minimax.hpp"

#include <cmath>
#include <vector>

#include "dpopt/rng.hpp"

namespace dpopt {
namespace {

long log_ratio_ceil(double initial, double target) {
  if (!(initial > 0) || !(target > 0)) {
    throw std::invalid_argument("log_ratio_ceil: positive arguments required");
  }
  const double r = std::log(initial / target);
  if (r <= 0) return 0;
  return static_cast<long>(std::ceil(r - 1e-12));
}

struct EffectiveMinimax {
  double mu_x;        // intrinsic + regularizer
  double mu_y;
  double mu_min;
  double smooth_f;    // smoothness of f alone
  double smooth_all;  // f plus regularizer
  double alpha = 0;   // x-side regularizer modulus
  double beta = 0;    // y-side
  Eigen::VectorXd anchor_x;
  Eigen::VectorXd anchor_y;
};

EffectiveMinimax effective(const MinimaxProblem& problem,
                           const std::optional<ProxRegularizer>& reg) {
  EffectiveMinimax e;
  e.alpha = reg ? reg->mu_x_reg : 0.0;
  e.beta = reg ? reg->mu_y_reg : 0.0;
  e.anchor_x = (reg && reg->anchor_x.size() > 0)
                   ? reg->anchor_x
                   : Eigen::VectorXd(Eigen::VectorXd::Zero(problem.dx()));
  e.anchor_y = (reg && reg->anchor_y.size() > 0)
                   ? reg->anchor_y
                   : Eigen::VectorXd(Eigen::VectorXd::Zero(problem.dy()));
  e.mu_x = problem.constants.mu_x + e.alpha;
  e.mu_y = problem.constants.mu_y + e.beta;
  e.mu_min = std::min(e.mu_x, e.mu_y);
  e.smooth_f = problem.constants.smooth;
  e.smooth_all = e.smooth_f + std::max(e.alpha, e.beta);
  if (!(e.mu_x > 0) || !(e.mu_y > 0)) {
    throw std::invalid_argument(
        "solve_saddle: effective moduli must be positive");
  }
  return e;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> prox_quadratic(
    const ProxRegularizer& reg, const Eigen::VectorXd& x_in,
    const Eigen::VectorXd& y_in, double lambda, const BallDomain& domain_x,
    const BallDomain& domain_y) {
  if (!(lambda > 0)) throw std::invalid_argument("prox_quadratic: lambda must be > 0");
  Eigen::VectorXd x = x_in;
  Eigen::VectorXd y = y_in;
  if (reg.mu_x_reg > 0) {
    x = (x_in + lambda * reg.mu_x_reg * reg.anchor_x) /
        (1.0 + lambda * reg.mu_x_reg);
  }
  if (reg.mu_y_reg > 0) {
    y = (y_in + lambda * reg.mu_y_reg * reg.anchor_y) /
        (1.0 + lambda * reg.mu_y_reg);
  }
  return {project(domain_x, x), project(domain_y, y)};
}

long iteration_budget_minimax(MinimaxSolverKind kind, int n, double kappa,
                              double gamma, double initial_gap,
                              double budget_constant) {
  if (!(kappa >= 1) || !(gamma > 0) || !(initial_gap > 0)) {
    throw std::invalid_argument("iteration_budget_minimax: bad arguments");
  }
  double t = 0;
  switch (kind) {
    case MinimaxSolverKind::kGda:
      t = static_cast<double>(n) * kappa * kappa;
      break;
    case MinimaxSolverKind::kExtragradient:
      t = static_cast<double>(n) * kappa;
      break;
    case MinimaxSolverKind::kSvrgMinimax:
      t = static_cast<double>(n) + kappa * kappa;
      break;
  }
  const long log_factor = log_ratio_ceil(initial_gap, gamma);
  return static_cast<long>(std::ceil(budget_constant * t * log_factor));
}

SaddleResult solve_saddle(const MinimaxProblem& problem,
                          const MinimaxSolverSpec& spec,
                          const std::optional<ProxRegularizer>& reg,
                          const OracleSolution* oracle_saddle) {
  if (!(spec.target_gamma > 0)) {
    throw std::invalid_argument("solve_saddle: target gamma must be positive");
  }
  const EffectiveMinimax eff = effective(problem, reg);
  const int n = problem.n();

  std::vector<Eigen::VectorXd> xi;
  xi.reserve(n);
  for (int i = 0; i < n; ++i) xi.push_back(problem.samples.sample(i));

  // Smoothness of the primal/dual value functions converts a distance bound
  // into a duality-gap bound; plan the iterations against that distance.
  // SvrgMinimax plans against the smoothness of f alone so the anchor
  // modulus never enters its schedule.
  const double plan_smooth = spec.kind == MinimaxSolverKind::kSvrgMinimax
                                 ? eff.smooth_f
                                 : eff.smooth_all;
  const double kx = plan_smooth / eff.mu_x;
  const double ky = plan_smooth / eff.mu_y;
  const double gap_factor = plan_smooth * (std::max(kx, ky) + 1.0);
  const double dist2_initial =
      4.0 * (problem.domain_x.radius * problem.domain_x.radius +
             problem.domain_y.radius * problem.domain_y.radius);
  const double dist2_target = spec.target_gamma / gap_factor;
  const long log_dist = log_ratio_ceil(dist2_initial, dist2_target);
  const double initial_gap = spec.initial_gap > 0
                                 ? spec.initial_gap
                                 : 0.5 * gap_factor * dist2_initial;

  const double kappa_budget =
      std::max(1.0, (spec.kind == MinimaxSolverKind::kSvrgMinimax
                         ? eff.smooth_f
                         : eff.smooth_all) /
                        eff.mu_min);

  // Plan the theoretical iteration counts, then size the default budget so
  // it covers both the spec formula and the plan. An explicit caller budget
  // is a hard constraint.
  long plan_iters = 0;
  long cost_per_iter = 0;
  int m = 0;
  double step = spec.step_size;
  switch (spec.kind) {
    case MinimaxSolverKind::kGda: {
      if (step <= 0) step = eff.mu_min / (8.0 * eff.smooth_all * eff.smooth_all);
      const double kappa = eff.smooth_all / eff.mu_min;
      plan_iters = 5 * static_cast<long>(std::ceil(kappa * kappa)) * log_dist + 1;
      cost_per_iter = n;
      break;
    }
    case MinimaxSolverKind::kExtragradient: {
      if (step <= 0) step = 1.0 / (4.0 * eff.smooth_all);
      const double kappa = eff.smooth_all / eff.mu_min;
      plan_iters = 4 * static_cast<long>(std::ceil(kappa)) * log_dist + 1;
      cost_per_iter = 2L * n;
      break;
    }
    case MinimaxSolverKind::kSvrgMinimax: {
      if (step <= 0) step = 1.0 / (8.0 * eff.smooth_f);
      const double kappa_f = std::max(1.0, eff.smooth_f / eff.mu_min);
      m = spec.epoch_length > 0
              ? spec.epoch_length
              : static_cast<int>(
                    std::max<double>(n, std::ceil(8.0 * kappa_f * kappa_f)));
      plan_iters = log_dist + 1;  // epochs; >= 2x distance^2 per epoch
      cost_per_iter = n + 2L * m;
      break;
    }
  }
  const long budget =
      spec.max_gradient_evals > 0
          ? spec.max_gradient_evals
          : std::max(iteration_budget_minimax(spec.kind, n, kappa_budget,
                                              spec.target_gamma, initial_gap,
                                              spec.budget_constant),
                     plan_iters * cost_per_iter);

  RngStream stream = SeedSplitter(spec.seed).stream("minimax_solver");
  Eigen::VectorXd x = reg ? project(problem.domain_x, eff.anchor_x)
                          : problem.domain_x.center;
  Eigen::VectorXd y = reg ? project(problem.domain_y, eff.anchor_y)
                          : problem.domain_y.center;
  long evals = 0;

  auto grad_x_full = [&](const Eigen::VectorXd& px, const Eigen::VectorXd& py) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(problem.dx());
    for (int i = 0; i < n; ++i) g += problem.grad_x(px, py, xi[i]);
    return Eigen::VectorXd(g / n);
  };
  auto grad_y_full = [&](const Eigen::VectorXd& px, const Eigen::VectorXd& py) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(problem.dy());
    for (int i = 0; i < n; ++i) g += problem.grad_y(px, py, xi[i]);
    return Eigen::VectorXd(g / n);
  };

  auto finish = [&]() {
    SaddleResult result;
    result.x = x;
    result.y = y;
    result.gradient_evals = evals;
    if (oracle_saddle != nullptr && oracle_saddle->y.has_value()) {
      result.certificate = eff.mu_x * (x - oracle_saddle->x).squaredNorm() +
                           eff.mu_y * (y - *oracle_saddle->y).squaredNorm();
    }
    return result;
  };

  if (log_dist == 0) return finish();

  auto check_budget = [&](long next_cost) {
    if (evals + next_cost > budget) {
      throw BudgetExceeded("solve_saddle: gradient budget exhausted after " +
                               std::to_string(evals) + " evaluations",
                           x, y);
    }
  };

  if (spec.kind == MinimaxSolverKind::kGda ||
      spec.kind == MinimaxSolverKind::kExtragradient) {
    for (long t = 0; t < plan_iters; ++t) {
      check_budget(cost_per_iter);
      Eigen::VectorXd gx = grad_x_full(x, y) + eff.alpha * (x - eff.anchor_x);
      Eigen::VectorXd gy = grad_y_full(x, y) - eff.beta * (y - eff.anchor_y);
      evals += n;
      if (spec.kind == MinimaxSolverKind::kGda) {
        x = project(problem.domain_x, Eigen::VectorXd(x - step * gx));
        y = project(problem.domain_y, Eigen::VectorXd(y + step * gy));
      } else {
        Eigen::VectorXd xh =
            project(problem.domain_x, Eigen::VectorXd(x - step * gx));
        Eigen::VectorXd yh =
            project(problem.domain_y, Eigen::VectorXd(y + step * gy));
        Eigen::VectorXd gxh = grad_x_full(xh, yh) + eff.alpha * (xh - eff.anchor_x);
        Eigen::VectorXd gyh = grad_y_full(xh, yh) - eff.beta * (yh - eff.anchor_y);
        evals += n;
        x = project(problem.domain_x, Eigen::VectorXd(x - step * gxh));
        y = project(problem.domain_y, Eigen::VectorXd(y + step * gyh));
      }
    }
    return finish();
  }

  // SvrgMinimax: variance-reduced gradients of f, regularizer through the
  // exact prox so the modulus never enters the step size.
  ProxRegularizer prox_reg;
  if (reg) prox_reg = *reg;
  prox_reg.anchor_x = eff.anchor_x;
  prox_reg.anchor_y = eff.anchor_y;
  for (long e = 0; e < plan_iters; ++e) {
    check_budget(cost_per_iter);
    const Eigen::VectorXd sx = x;
    const Eigen::VectorXd sy = y;
    const Eigen::VectorXd sgx = grad_x_full(sx, sy);
    const Eigen::VectorXd sgy = grad_y_full(sx, sy);
    evals += n;
    for (int t = 0; t < m; ++t) {
      const int i = stream.uniform_int(n);
      Eigen::VectorXd vx =
          problem.grad_x(x, y, xi[i]) - problem.grad_x(sx, sy, xi[i]) + sgx;
      Eigen::VectorXd vy =
          problem.grad_y(x, y, xi[i]) - problem.grad_y(sx, sy, xi[i]) + sgy;
      evals += 2;
      auto [nx, ny] = prox_quadratic(prox_reg, Eigen::VectorXd(x - step * vx),
                                     Eigen::VectorXd(y + step * vy), step,
                                     problem.domain_x, problem.domain_y);
      x = std::move(nx);
      y = std::move(ny);
    }
  }
  return finish();
}

}  // namespace dpopt
