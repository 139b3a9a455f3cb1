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

#include "dpopt/families.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "dpopt/oracle.hpp"

namespace dpopt {

BallDomain QuadraticFamily::domain() const {
  return BallDomain::origin(dim, domain_radius);
}

Eigen::VectorXd QuadraticFamily::mean() const {
  if (population_mean.size() > 0) {
    if (population_mean.size() != dim) {
      throw std::invalid_argument("QuadraticFamily: population_mean dimension");
    }
    return population_mean;
  }
  return Eigen::VectorXd::Constant(dim, 0.5);
}

SampleSet QuadraticFamily::draw(int n, RngStream& stream) const {
  const Eigen::VectorXd m = mean();
  Eigen::MatrixXd data(dim, n);
  for (int i = 0; i < n; ++i) {
    data.col(i) = m + stream.uniform_ball(dim, sample_radius);
  }
  return SampleSet(std::move(data));
}

MinProblem QuadraticFamily::make_problem(const SampleSet& samples) const {
  return make_quadratic_min_problem(samples, mu, domain());
}

MinProblem QuadraticFamily::draw_problem(int n, RngStream& stream) const {
  return make_problem(draw(n, stream));
}

double QuadraticFamily::population_excess_risk(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd m = mean();
  if (m.norm() >= domain_radius) {
    throw std::invalid_argument(
        "QuadraticFamily: population mean must be interior");
  }
  return 0.5 * mu * (x - m).squaredNorm();
}

BallDomain LogisticFamily::domain() const {
  return BallDomain::origin(dim, domain_radius);
}

SampleSet LogisticFamily::draw(int n, RngStream& stream) const {
  Eigen::VectorXd w = true_weights.size() > 0
                          ? true_weights
                          : Eigen::VectorXd(Eigen::VectorXd::Ones(dim));
  Eigen::MatrixXd data(dim + 1, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd a = stream.uniform_ball(dim, feature_radius);
    const double p = 1.0 / (1.0 + std::exp(-w.dot(a)));
    data.col(i).head(dim) = a;
    data.col(i)[dim] = stream.uniform() < p ? 1.0 : -1.0;
  }
  return SampleSet(std::move(data));
}

MinProblem LogisticFamily::make_problem(const SampleSet& samples) const {
  return make_logistic_min_problem(samples, domain(), ridge);
}

MinProblem LogisticFamily::draw_problem(int n, RngStream& stream) const {
  return make_problem(draw(n, stream));
}

BallDomain BilinearFamily::domain_x() const {
  return BallDomain::origin(dx, domain_radius_x);
}

BallDomain BilinearFamily::domain_y() const {
  return BallDomain::origin(dy, domain_radius_y);
}

Eigen::MatrixXd BilinearFamily::population_a() const {
  if (a_mean.size() > 0) {
    if (a_mean.rows() != dy || a_mean.cols() != dx) {
      throw std::invalid_argument("BilinearFamily: a_mean shape");
    }
    return a_mean;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dy, dx);
  for (int i = 0; i < std::min(dx, dy); ++i) a(i, i) = 1.0;
  return a;
}

Eigen::VectorXd BilinearFamily::population_b() const {
  if (b_mean.size() > 0) {
    if (b_mean.size() != dy) {
      throw std::invalid_argument("BilinearFamily: b_mean dimension");
    }
    return b_mean;
  }
  return Eigen::VectorXd::Constant(dy, 0.5);
}

SampleSet BilinearFamily::draw(int n, RngStream& stream) const {
  const Eigen::MatrixXd a0 = population_a();
  const Eigen::VectorXd b0 = population_b();
  Eigen::MatrixXd data(dx * dy + dy, n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < dy; ++r)
      for (int c = 0; c < dx; ++c)
        data(r * dx + c, i) = a0(r, c) + stream.uniform(-noise_scale, noise_scale);
    for (int r = 0; r < dy; ++r)
      data(dx * dy + r, i) = b0[r] + stream.uniform(-noise_scale, noise_scale);
  }
  return SampleSet(std::move(data));
}

MinimaxProblem BilinearFamily::make_problem(const SampleSet& samples) const {
  std::vector<Eigen::MatrixXd> a_stack;
  std::vector<Eigen::VectorXd> b_stack;
  a_stack.reserve(samples.size());
  b_stack.reserve(samples.size());
  for (int i = 0; i < samples.size(); ++i) {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    decode_bilinear_sample(samples.sample(i), dx, dy, a, b);
    a_stack.push_back(std::move(a));
    b_stack.push_back(std::move(b));
  }
  return make_bilinear_saddle_problem(a_stack, b_stack, mu_x, mu_y, domain_x(),
                                      domain_y());
}

MinimaxProblem BilinearFamily::draw_problem(int n, RngStream& stream) const {
  return make_problem(draw(n, stream));
}

double BilinearFamily::population_weak_gap(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y) const {
  return bilinear_quadratic_gap(population_a(), population_b(), mu_x, mu_y,
                                domain_x(), domain_y(), x, y);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> BilinearFamily::population_saddle()
    const {
  const Eigen::MatrixXd a = population_a();
  const Eigen::VectorXd b = population_b();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dx + dy, dx + dy);
  kkt.topLeftCorner(dx, dx) = mu_x * Eigen::MatrixXd::Identity(dx, dx);
  kkt.topRightCorner(dx, dy) = a.transpose();
  kkt.bottomLeftCorner(dy, dx) = a;
  kkt.bottomRightCorner(dy, dy) = -mu_y * Eigen::MatrixXd::Identity(dy, dy);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dx + dy);
  rhs.tail(dy) = b;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) {
    throw NotSupportedError("BilinearFamily: singular population system");
  }
  Eigen::VectorXd z = lu.solve(rhs);
  return {z.head(dx), z.tail(dy)};
}

double BilinearFamily::population_primal_value(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd a = population_a();
  const Eigen::VectorXd b = population_b();
  const Eigen::VectorXd g = a * x - b;
  const BallDomain dom_y = domain_y();
  Eigen::VectorXd y_best;
  if (mu_y > 0) {
    y_best = project(dom_y, Eigen::VectorXd(g / mu_y));
  } else if (g.norm() > 0) {
    y_best = dom_y.center + dom_y.radius * g / g.norm();
  } else {
    y_best = dom_y.center;
  }
  return 0.5 * mu_x * x.squaredNorm() + g.dot(y_best) -
         0.5 * mu_y * y_best.squaredNorm();
}

double BilinearFamily::population_primal_excess(const Eigen::VectorXd& x) const {
  const auto [xs, ys] = population_saddle();
  return population_primal_value(x) - population_primal_value(xs);
}

}  // namespace dpopt
