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

#include "dpopt/oracle.hpp"
#include "dpopt/problem.hpp"

namespace dpopt {

// Raised when the gradient budget runs out before the planned iteration
// count completes; carries the best iterate reached so far.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string message, Eigen::VectorXd best_x,
                 Eigen::VectorXd best_y = Eigen::VectorXd())
      : std::runtime_error(std::move(message)),
        best_x(std::move(best_x)),
        best_y(std::move(best_y)) {}

  Eigen::VectorXd best_x;
  Eigen::VectorXd best_y;
};

enum class MinSolverKind { kSgd, kSvrg, kSarah };

struct MinSolverSpec {
  MinSolverKind kind = MinSolverKind::kSvrg;
  double target_gamma = 1e-8;       // expected empirical suboptimality
  double step_size = 0;             // 0 -> per-kind default
  int epoch_length = 0;             // 0 -> max(n, ceil(8 kappa_eff))
  long max_gradient_evals = 0;      // 0 -> iteration_budget_min default
  std::uint64_t seed = 0;
  double budget_constant = 3.0;     // c in the budget formula
  double initial_gap = 0;           // Delta_0 estimate; 0 -> smoothness bound
};

struct MinSolveResult {
  Eigen::VectorXd point;
  long gradient_evals = 0;
  // Distance to the exact optimum when one is supplied by the caller.
  std::optional<double> certificate;
};

// Default full-gradient-equivalent budget:
// c * (n + kappa) * ceil(log(Delta_0 / gamma)).
long iteration_budget_min(MinSolverKind kind, int n, double kappa, double gamma,
                          double initial_gap, double budget_constant = 3.0);

// Runs the requested solver on the (optionally anchored) finite-sum problem
// min F(x) + (reg.modulus/2)||x - reg.anchor||^2. The regularizer gradient
// is added in closed form so the per-sample Lipschitz constant is
// unaffected. Requires effective strong convexity > 0.
MinSolveResult solve_min(
    const MinProblem& problem, const MinSolverSpec& spec,
    const std::optional<QuadraticRegularizer>& reg = std::nullopt,
    const Eigen::VectorXd* oracle_optimum = nullptr);

}  // namespace dpopt
