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

#include <optional>

#include "dpopt/problem.hpp"

namespace dpopt {

// Quadratic anchor regularizer (modulus/2) ||x - anchor||^2 for
// minimization problems.
struct QuadraticRegularizer {
  double modulus = 0;
  Eigen::VectorXd anchor;
};

// SC-SC anchor regularizer
// (mu_x_reg/2)||x - anchor_x||^2 - (mu_y_reg/2)||y - anchor_y||^2.
struct ProxRegularizer {
  double mu_x_reg = 0;
  double mu_y_reg = 0;
  Eigen::VectorXd anchor_x;
  Eigen::VectorXd anchor_y;
};

// Ground-truth solution of a test problem.
struct OracleSolution {
  Eigen::VectorXd x;
  std::optional<Eigen::VectorXd> y;
  // Whether the unconstrained solution lies strictly inside the domain(s);
  // only then is the returned point the exact constrained optimum for
  // saddle problems.
  bool interior = true;
};

// Minimizer of the (optionally anchored) quadratic empirical objective:
// projection of (mu * mean + mu_reg * anchor) / (mu + mu_reg).
OracleSolution exact_min_quadratic(
    const MinProblem& problem,
    const std::optional<QuadraticRegularizer>& reg = std::nullopt);

// Saddle of the (optionally anchored) bilinear-quadratic empirical
// objective via the 2-block KKT linear system; verifies the residual.
OracleSolution exact_saddle_bilinear(
    const MinimaxProblem& problem,
    const std::optional<ProxRegularizer>& reg = std::nullopt);

// Exhaustive grid search over the domain(s); total dimension <= 4,
// resolution <= 201 points per axis. For minimax, returns the grid point
// minimizing the grid-restricted worst case over y.
OracleSolution grid_bruteforce(const MinProblem& problem, int resolution);
OracleSolution grid_bruteforce(const MinimaxProblem& problem, int resolution);

// Duality gap of a bilinear-quadratic objective with means (A, b): the
// inner max/min are closed-form (projection for positive moduli, radial
// boundary point for the pure bilinear case).
double bilinear_quadratic_gap(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b, double mu_x,
                              double mu_y, const BallDomain& domain_x,
                              const BallDomain& domain_y,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

// Empirical duality gap max_y F(x, y') - min_x F(x', y) of a supported
// problem family, exact up to linear-algebra precision.
double duality_gap_exact(const MinimaxProblem& problem,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace dpopt
