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

#include "dpopt/oracle.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace dpopt {

OracleSolution exact_min_quadratic(
    const MinProblem& problem, const std::optional<QuadraticRegularizer>& reg) {
  if (problem.family != MinFamily::kQuadratic) {
    throw NotSupportedError("exact_min_quadratic: not a quadratic problem");
  }
  const double mu = problem.constants.strong;
  Eigen::VectorXd target = problem.samples.mean();
  if (reg && reg->modulus > 0) {
    target = (mu * target + reg->modulus * reg->anchor) / (mu + reg->modulus);
  }
  OracleSolution sol;
  sol.interior = problem.domain.contains(target, 0.0) &&
                 (target - problem.domain.center).norm() < problem.domain.radius;
  sol.x = project(problem.domain, target);
  return sol;
}

OracleSolution exact_saddle_bilinear(const MinimaxProblem& problem,
                                     const std::optional<ProxRegularizer>& reg) {
  if (problem.family != MinimaxFamily::kBilinearQuadratic) {
    throw NotSupportedError("exact_saddle_bilinear: not a bilinear problem");
  }
  const int dx = problem.dx();
  const int dy = problem.dy();
  Eigen::MatrixXd a_mean;
  Eigen::VectorXd b_mean;
  bilinear_means(problem, a_mean, b_mean);

  const double alpha = reg ? reg->mu_x_reg : 0.0;
  const double beta = reg ? reg->mu_y_reg : 0.0;
  const double mx = problem.constants.mu_x + alpha;
  const double my = problem.constants.mu_y + beta;
  if (!(mx > 0) || !(my > 0)) {
    throw std::invalid_argument(
        "exact_saddle_bilinear: effective moduli must be positive");
  }

  // Stationarity of the regularized objective:
  //   mx x + A^T y = alpha u
  //   A x  - my y  = b - beta v
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dx + dy, dx + dy);
  kkt.topLeftCorner(dx, dx) = mx * Eigen::MatrixXd::Identity(dx, dx);
  kkt.topRightCorner(dx, dy) = a_mean.transpose();
  kkt.bottomLeftCorner(dy, dx) = a_mean;
  kkt.bottomRightCorner(dy, dy) = -my * Eigen::MatrixXd::Identity(dy, dy);
  Eigen::VectorXd rhs(dx + dy);
  rhs.head(dx) =
      (reg && alpha > 0) ? Eigen::VectorXd(alpha * reg->anchor_x)
                         : Eigen::VectorXd(Eigen::VectorXd::Zero(dx));
  rhs.tail(dy) = b_mean;
  if (reg && beta > 0) rhs.tail(dy) -= beta * reg->anchor_y;

  Eigen::VectorXd z = kkt.fullPivLu().solve(rhs);
  const double residual = (kkt * z - rhs).norm();
  if (!(residual <= 1e-10 * std::max(1.0, rhs.norm()))) {
    throw std::runtime_error("exact_saddle_bilinear: KKT residual too large");
  }

  OracleSolution sol;
  Eigen::VectorXd xs = z.head(dx);
  Eigen::VectorXd ys = z.tail(dy);
  sol.interior =
      (xs - problem.domain_x.center).norm() < problem.domain_x.radius &&
      (ys - problem.domain_y.center).norm() < problem.domain_y.radius;
  sol.x = project(problem.domain_x, xs);
  sol.y = project(problem.domain_y, ys);
  return sol;
}

namespace {

// Grid coordinates center - D ... center + D, `resolution` points per axis.
std::vector<Eigen::VectorXd> ball_grid(const BallDomain& domain, int resolution) {
  const int d = domain.dimension();
  std::vector<Eigen::VectorXd> points;
  std::vector<int> idx(d, 0);
  while (true) {
    Eigen::VectorXd p(d);
    for (int j = 0; j < d; ++j) {
      const double t =
          resolution == 1 ? 0.0 : -1.0 + 2.0 * idx[j] / (resolution - 1);
      p[j] = domain.center[j] + t * domain.radius;
    }
    if (domain.contains(p)) points.push_back(std::move(p));
    int j = 0;
    for (; j < d; ++j) {
      if (++idx[j] < resolution) break;
      idx[j] = 0;
    }
    if (j == d) break;
  }
  return points;
}

void check_grid_limits(int total_dim, int resolution) {
  if (total_dim > 4) {
    throw std::invalid_argument("grid_bruteforce: total dimension must be <= 4");
  }
  if (resolution < 1 || resolution > 201) {
    throw std::invalid_argument("grid_bruteforce: resolution must be in [1, 201]");
  }
}

}  // namespace

OracleSolution grid_bruteforce(const MinProblem& problem, int resolution) {
  check_grid_limits(problem.dimension(), resolution);
  const auto points = ball_grid(problem.domain, resolution);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_point;
  for (const auto& p : points) {
    const double v = empirical_value(problem, p);
    if (v < best) {
      best = v;
      best_point = p;
    }
  }
  OracleSolution sol;
  sol.x = best_point;
  sol.interior = (best_point - problem.domain.center).norm() <
                 problem.domain.radius * (1.0 - 1e-12);
  return sol;
}

OracleSolution grid_bruteforce(const MinimaxProblem& problem, int resolution) {
  check_grid_limits(problem.dx() + problem.dy(), resolution);
  const auto xs = ball_grid(problem.domain_x, resolution);
  const auto ys = ball_grid(problem.domain_y, resolution);
  double best_worst = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  Eigen::VectorXd best_y_at_x;
  for (const auto& x : xs) {
    double worst = -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd* arg = nullptr;
    for (const auto& y : ys) {
      const double v = empirical_value(problem, x, y);
      if (v > worst) {
        worst = v;
        arg = &y;
      }
    }
    if (worst < best_worst) {
      best_worst = worst;
      best_x = x;
      best_y_at_x = *arg;
    }
  }
  OracleSolution sol;
  sol.x = best_x;
  sol.y = best_y_at_x;
  sol.interior = true;
  return sol;
}

double bilinear_quadratic_gap(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              double mu_x, double mu_y,
                              const BallDomain& domain_x,
                              const BallDomain& domain_y,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  // max over y' of <g, y'> - (mu_y/2)||y'||^2 with g = A x - b.
  const Eigen::VectorXd g = a * x - b;
  Eigen::VectorXd y_best;
  if (mu_y > 0) {
    y_best = project(domain_y, Eigen::VectorXd(g / mu_y));
  } else if (g.norm() > 0) {
    y_best = domain_y.center + domain_y.radius * g / g.norm();
  } else {
    y_best = domain_y.center;
  }
  const double max_val = 0.5 * mu_x * x.squaredNorm() + g.dot(y_best) -
                         0.5 * mu_y * y_best.squaredNorm();

  // min over x' of (mu_x/2)||x'||^2 + <h, x'> with h = A^T y.
  const Eigen::VectorXd h = a.transpose() * y;
  Eigen::VectorXd x_best;
  if (mu_x > 0) {
    x_best = project(domain_x, Eigen::VectorXd(-h / mu_x));
  } else if (h.norm() > 0) {
    x_best = domain_x.center - domain_x.radius * h / h.norm();
  } else {
    x_best = domain_x.center;
  }
  const double min_val = 0.5 * mu_x * x_best.squaredNorm() + h.dot(x_best) -
                         y.dot(b) - 0.5 * mu_y * y.squaredNorm();

  return max_val - min_val;
}

double duality_gap_exact(const MinimaxProblem& problem, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  if (problem.family != MinimaxFamily::kBilinearQuadratic) {
    throw NotSupportedError("duality_gap_exact: unsupported problem family");
  }
  Eigen::MatrixXd a_mean;
  Eigen::VectorXd b_mean;
  bilinear_means(problem, a_mean, b_mean);
  return bilinear_quadratic_gap(a_mean, b_mean, problem.constants.mu_x,
                                problem.constants.mu_y, problem.domain_x,
                                problem.domain_y, x, y);
}

}  // namespace dpopt
