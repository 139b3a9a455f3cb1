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

#include <utility>

#include "dpopt/problem.hpp"
#include "dpopt/rng.hpp"

namespace dpopt {

// Canonical synthetic families. Population-level optima are known in closed
// form, so population risks and gaps are exact rather than estimated.

// xi ~ uniform ball of sample_radius around population_mean;
// f(x; xi) = (mu/2) ||x - xi||^2. Population optimum is population_mean
// (kept interior by construction).
struct QuadraticFamily {
  int dim = 2;
  double mu = 1.0;
  double sample_radius = 1.0;
  Eigen::VectorXd population_mean;  // empty -> 0.5 * ones
  double domain_radius = 5.0;

  BallDomain domain() const;
  Eigen::VectorXd mean() const;
  SampleSet draw(int n, RngStream& stream) const;
  MinProblem make_problem(const SampleSet& samples) const;
  MinProblem draw_problem(int n, RngStream& stream) const;

  // F(x) - F(x*) = (mu/2) ||x - mean||^2 for the interior optimum.
  double population_excess_risk(const Eigen::VectorXd& x) const;
};

// Features uniform in a ball, labels from a logistic model with
// true_weights. No closed-form population optimum; holdout estimation only.
struct LogisticFamily {
  int dim = 4;
  double feature_radius = 1.0;
  double ridge = 0.0;
  Eigen::VectorXd true_weights;  // empty -> ones
  double domain_radius = 5.0;

  BallDomain domain() const;
  SampleSet draw(int n, RngStream& stream) const;
  MinProblem make_problem(const SampleSet& samples) const;
  MinProblem draw_problem(int n, RngStream& stream) const;
};

// A_i = A_mean + noise, b_i = b_mean + noise with uniform entry noise, so
// sample norms are bounded and the population means are exact.
struct BilinearFamily {
  int dx = 2;
  int dy = 2;
  double mu_x = 1.0;
  double mu_y = 1.0;
  Eigen::MatrixXd a_mean;  // empty -> identity-like
  Eigen::VectorXd b_mean;  // empty -> 0.5 * ones
  double noise_scale = 0.25;
  double domain_radius_x = 5.0;
  double domain_radius_y = 5.0;

  BallDomain domain_x() const;
  BallDomain domain_y() const;
  Eigen::MatrixXd population_a() const;
  Eigen::VectorXd population_b() const;
  SampleSet draw(int n, RngStream& stream) const;
  MinimaxProblem make_problem(const SampleSet& samples) const;
  MinimaxProblem draw_problem(int n, RngStream& stream) const;

  // Weak duality gap of the population objective at (x, y); inner problems
  // are solved in closed form over the ball domains.
  double population_weak_gap(const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y) const;

  // Unconstrained population saddle from the stationarity system; requires
  // mu_x > 0 or population_a() of full column rank.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> population_saddle() const;

  // Primal value max_y of the population objective at x, and its excess
  // over the population saddle.
  double population_primal_value(const Eigen::VectorXd& x) const;
  double population_primal_excess(const Eigen::VectorXd& x) const;
};

}  // namespace dpopt
