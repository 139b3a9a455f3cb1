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

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "dpopt/oracle.hpp"
#include "dpopt/problem.hpp"
#include "dpopt/solvers_min.hpp"

namespace dpopt {

enum class MinimaxSolverKind { kGda, kExtragradient, kSvrgMinimax };

struct MinimaxSolverSpec {
  MinimaxSolverKind kind = MinimaxSolverKind::kExtragradient;
  double target_gamma = 1e-8;   // expected duality gap
  double step_size = 0;         // 0 -> per-kind default
  int epoch_length = 0;         // SvrgMinimax inner loop; 0 -> default
  long max_gradient_evals = 0;  // 0 -> iteration_budget_minimax default
  std::uint64_t seed = 0;
  double budget_constant = 3.0;
  double initial_gap = 0;
};

struct SaddleResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  long gradient_evals = 0;
  // mu_x ||x - x*||^2 + mu_y ||y - y*||^2 when an exact saddle is supplied.
  std::optional<double> certificate;
};

// Exact saddle of lambda * reg + (1/2)||x - x'||^2 - (1/2)||y - y'||^2 for
// the quadratic-anchor regularizer, projected onto the domains:
// x = (x' + lambda mu_x_reg anchor_x) / (1 + lambda mu_x_reg), same for y.
std::pair<Eigen::VectorXd, Eigen::VectorXd> prox_quadratic(
    const ProxRegularizer& reg, const Eigen::VectorXd& x_in,
    const Eigen::VectorXd& y_in, double lambda, const BallDomain& domain_x,
    const BallDomain& domain_y);

// Default gradient budget: c * T(n, kappa) * ceil(log(Delta_0 / gamma)),
// with T = n kappa^2 for GDA, n kappa for Extragradient and n + kappa^2 for
// SvrgMinimax (whose kappa excludes the anchor-regularizer modulus).
long iteration_budget_minimax(MinimaxSolverKind kind, int n, double kappa,
                              double gamma, double initial_gap,
                              double budget_constant = 3.0);

// Solves the (optionally anchor-regularized) finite-sum saddle problem.
// GDA and Extragradient fold the regularizer gradient in analytically;
// SvrgMinimax applies it through the exact proximal step, so its step size
// depends on the smoothness of f only.
SaddleResult solve_saddle(const MinimaxProblem& problem,
                          const MinimaxSolverSpec& spec,
                          const std::optional<ProxRegularizer>& reg = std::nullopt,
                          const OracleSolution* oracle_saddle = nullptr);

}  // namespace dpopt
