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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "dpopt/families.hpp"
#include "dpopt/oracle.hpp"
#include "dpopt/problem.hpp"
#include "dpopt/rng.hpp"

using namespace dpopt;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("project: interior point is fixed") {
  BallDomain dom = BallDomain::origin(2, 1.0);
  CHECK((project(dom, vec2(0.5, 0.0)) - vec2(0.5, 0.0)).norm() == 0.0);
}

TEST_CASE("project: exterior point scales radially") {
  BallDomain dom = BallDomain::origin(2, 1.0);
  const Eigen::VectorXd p = project(dom, vec2(3.0, 4.0));
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("project: center is fixed") {
  BallDomain dom(vec2(1.0, 1.0), 2.0);
  CHECK((project(dom, vec2(1.0, 1.0)) - vec2(1.0, 1.0)).norm() == 0.0);
}

TEST_CASE("project: dimension mismatch throws") {
  BallDomain dom = BallDomain::origin(2, 1.0);
  CHECK_THROWS_AS(project(dom, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("project: idempotent and non-expansive on random pairs") {
  RngStream stream(7);
  BallDomain dom(vec2(0.3, -0.2), 1.5);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd p = 4.0 * stream.normal_vector(2);
    const Eigen::VectorXd q = 4.0 * stream.normal_vector(2);
    const Eigen::VectorXd pp = project(dom, p);
    CHECK((project(dom, pp) - pp).norm() == 0.0);
    CHECK((project(dom, p) - project(dom, q)).norm() <= (p - q).norm() + 1e-12);
  }
}

TEST_CASE("quadratic problem: empirical minimizer is projected mean") {
  Eigen::MatrixXd data(2, 2);
  data.col(0) = vec2(1, 0);
  data.col(1) = vec2(0, 1);
  MinProblem p = make_quadratic_min_problem(SampleSet(data), 1.0,
                                            BallDomain::origin(2, 10.0));
  const OracleSolution sol = exact_min_quadratic(p);
  CHECK((sol.x - vec2(0.5, 0.5)).norm() <= 1e-15);
  CHECK(sol.interior);

  // Mean outside the unit ball projects onto the boundary.
  Eigen::MatrixXd one(2, 1);
  one.col(0) = vec2(2, 0);
  MinProblem q = make_quadratic_min_problem(SampleSet(one), 1.0,
                                            BallDomain::origin(2, 1.0));
  const OracleSolution sol_q = exact_min_quadratic(q);
  CHECK((sol_q.x - vec2(1, 0)).norm() <= 1e-15);
  CHECK_FALSE(sol_q.interior);
}

TEST_CASE("quadratic problem: mu must be positive") {
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(make_quadratic_min_problem(SampleSet(data), 0.0,
                                             BallDomain::origin(2, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("quadratic problem: oracle mean matches for uniform ball samples") {
  RngStream stream(11);
  QuadraticFamily family;
  family.dim = 2;
  family.mu = 2.0;
  SampleSet samples = family.draw(50, stream);
  MinProblem p = family.make_problem(samples);
  CHECK((exact_min_quadratic(p).x - samples.mean()).norm() <= 1e-14);
}

TEST_CASE("logistic problem: loss at zero is log 2, gradient is -a/2") {
  Eigen::MatrixXd data(3, 2);
  data.col(0) << 0.5, -0.25, 1.0;
  data.col(1) << -0.3, 0.8, -1.0;
  MinProblem p =
      make_logistic_min_problem(SampleSet(data), BallDomain::origin(2, 2.0), 0.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < 2; ++i) {
    CHECK(p.loss(zero, data.col(i)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  }
  const Eigen::VectorXd g = p.grad(zero, data.col(0));
  CHECK((g - vec2(-0.25, 0.125)).norm() <= 1e-14);
}

TEST_CASE("logistic problem: malformed labels rejected") {
  Eigen::MatrixXd data(3, 1);
  data.col(0) << 0.5, 0.5, 0.7;
  CHECK_THROWS_AS(
      make_logistic_min_problem(SampleSet(data), BallDomain::origin(2, 1.0), 0.0),
      std::invalid_argument);
}

TEST_CASE("bilinear problem: zero data gives origin saddle") {
  std::vector<Eigen::MatrixXd> as(3, Eigen::MatrixXd::Zero(2, 2));
  std::vector<Eigen::VectorXd> bs(3, Eigen::VectorXd::Zero(2));
  MinimaxProblem p = make_bilinear_saddle_problem(
      as, bs, 1.0, 1.0, BallDomain::origin(2, 2.0), BallDomain::origin(2, 2.0));
  const OracleSolution sol = exact_saddle_bilinear(p);
  CHECK(sol.x.norm() <= 1e-14);
  CHECK(sol.y->norm() <= 1e-14);
}

TEST_CASE("bilinear problem: symmetric 1-d instance has origin saddle") {
  std::vector<Eigen::MatrixXd> as{Eigen::MatrixXd::Constant(1, 1, 1.0)};
  std::vector<Eigen::VectorXd> bs{Eigen::VectorXd::Zero(1)};
  MinimaxProblem p = make_bilinear_saddle_problem(
      as, bs, 1.0, 1.0, BallDomain::origin(1, 1.0), BallDomain::origin(1, 1.0));
  const OracleSolution sol = exact_saddle_bilinear(p);
  CHECK(std::abs(sol.x[0]) <= 1e-14);
  CHECK(std::abs((*sol.y)[0]) <= 1e-14);
}

TEST_CASE("bilinear problem: shape mismatch throws") {
  std::vector<Eigen::MatrixXd> as{Eigen::MatrixXd::Zero(2, 2),
                                  Eigen::MatrixXd::Zero(3, 2)};
  std::vector<Eigen::VectorXd> bs{Eigen::VectorXd::Zero(2),
                                  Eigen::VectorXd::Zero(3)};
  CHECK_THROWS_AS(
      make_bilinear_saddle_problem(as, bs, 1.0, 1.0, BallDomain::origin(2, 1.0),
                                   BallDomain::origin(2, 1.0)),
      std::invalid_argument);
}

TEST_CASE("partition: sizes and lawfulness") {
  CHECK(partition_sizes(8, 4) == std::vector<int>{2, 2, 2, 2});
  CHECK(partition_sizes(10, 3) == std::vector<int>{3, 3, 4});
  CHECK(partition_sizes(5, 5) == std::vector<int>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(partition_sizes(3, 4), std::invalid_argument);

  RngStream stream(3);
  QuadraticFamily family;
  SampleSet samples = family.draw(23, stream);
  const auto blocks = partition_disjoint(samples, 4);
  int offset = 0;
  for (const auto& block : blocks) {
    for (int i = 0; i < block.size(); ++i) {
      CHECK((block.sample(i) - samples.sample(offset + i)).norm() == 0.0);
    }
    offset += block.size();
  }
  CHECK(offset == samples.size());
  CHECK(blocks.back().size() - blocks.front().size() <= 4 - 1);
}

TEST_CASE("empirical value and gradient") {
  Eigen::MatrixXd data(2, 4);
  data.col(0) = vec2(1, 0);
  data.col(1) = vec2(0, 1);
  data.col(2) = vec2(-1, 0);
  data.col(3) = vec2(0, -1);
  MinProblem p = make_quadratic_min_problem(SampleSet(data), 2.0,
                                            BallDomain::origin(2, 5.0));

  // Gradient vanishes at the sample mean.
  CHECK(empirical_grad(p, p.samples.mean()).norm() <= 1e-15);

  // Hand-summed value at x = (1, 1): mean of (mu/2)|x - xi|^2 over the four
  // samples = (1/4)(1 + 1 + 5 + 5) = 3.
  CHECK(empirical_value(p, vec2(1, 1)) == doctest::Approx(3.0).epsilon(1e-14));

  // Single-sample set: empirical value equals the per-sample value.
  Eigen::MatrixXd one(2, 1);
  one.col(0) = vec2(0.25, -0.5);
  MinProblem q = make_quadratic_min_problem(SampleSet(one), 2.0,
                                            BallDomain::origin(2, 5.0));
  CHECK(empirical_value(q, vec2(1, 1)) ==
        doctest::Approx(q.loss(vec2(1, 1), one.col(0))).epsilon(1e-15));
}

TEST_CASE("sampleset: text round trip and validation") {
  Eigen::MatrixXd data(3, 2);
  data << 0.125, -3.5, 1e-7, 2.25, 9.0, -0.0625;
  std::ostringstream out;
  write_sampleset(out, SampleSet(data));
  std::istringstream in(out.str());
  SampleSet back = read_sampleset(in);
  CHECK((back.columns() - data).norm() == 0.0);

  std::istringstream bad("1.0 2.0\n1.0\n");
  CHECK_THROWS_AS(read_sampleset(bad), std::invalid_argument);
  std::istringstream nonnum("1.0 x\n");
  CHECK_THROWS_AS(read_sampleset(nonnum), std::invalid_argument);
}

TEST_CASE("certified constants hold on random probe pairs") {
  RngStream stream(2026);
  QuadraticFamily qf;
  MinProblem quad = qf.draw_problem(12, stream);
  LogisticFamily lf;
  MinProblem logi = lf.draw_problem(12, stream);
  logi = make_logistic_min_problem(logi.samples, lf.domain(), 0.3);
  BilinearFamily bf;
  MinimaxProblem bil = bf.draw_problem(12, stream);

  const int probes = 10000;
  for (int t = 0; t < probes; ++t) {
    for (const MinProblem* p : {&quad, &logi}) {
      const Eigen::VectorXd x1 =
          project(p->domain, 6.0 * stream.normal_vector(p->dimension()));
      const Eigen::VectorXd x2 =
          project(p->domain, 6.0 * stream.normal_vector(p->dimension()));
      const Eigen::VectorXd xi = p->samples.sample(t % p->n());
      const double dist = (x1 - x2).norm();
      CHECK(std::abs(p->loss(x1, xi) - p->loss(x2, xi)) <=
            p->constants.lipschitz * dist + 1e-12);
      CHECK((p->grad(x1, xi) - p->grad(x2, xi)).norm() <=
            p->constants.smooth * dist + 1e-12);
      if (p->constants.strong > 0) {
        // Midpoint test of convexity for loss - (mu/2)||x||^2.
        const Eigen::VectorXd mid = 0.5 * (x1 + x2);
        const double mu = p->constants.strong;
        auto centered = [&](const Eigen::VectorXd& v) {
          return p->loss(v, xi) - 0.5 * mu * v.squaredNorm();
        };
        CHECK(centered(mid) <= 0.5 * (centered(x1) + centered(x2)) + 1e-12);
      }
    }
    {
      const Eigen::VectorXd x1 =
          project(bil.domain_x, 6.0 * stream.normal_vector(bil.dx()));
      const Eigen::VectorXd x2 =
          project(bil.domain_x, 6.0 * stream.normal_vector(bil.dx()));
      const Eigen::VectorXd y1 =
          project(bil.domain_y, 6.0 * stream.normal_vector(bil.dy()));
      const Eigen::VectorXd y2 =
          project(bil.domain_y, 6.0 * stream.normal_vector(bil.dy()));
      const Eigen::VectorXd xi = bil.samples.sample(t % bil.n());
      const double dist2 = (x1 - x2).squaredNorm() + (y1 - y2).squaredNorm();
      const double dv = bil.value(x1, y1, xi) - bil.value(x2, y2, xi);
      const double lipschitz = bil.constants.lipschitz;
      CHECK(dv * dv <= lipschitz * lipschitz * dist2 + 1e-9);
      const double grad_shift =
          (bil.grad_x(x1, y1, xi) - bil.grad_x(x2, y2, xi)).squaredNorm() +
          (bil.grad_y(x1, y1, xi) - bil.grad_y(x2, y2, xi)).squaredNorm();
      const double ell = bil.constants.smooth;
      CHECK(grad_shift <= ell * ell * dist2 + 1e-9);
      // Convex in x at fixed y, concave in y at fixed x.
      const Eigen::VectorXd midx = 0.5 * (x1 + x2);
      CHECK(bil.value(midx, y1, xi) <=
            0.5 * (bil.value(x1, y1, xi) + bil.value(x2, y1, xi)) + 1e-12);
      const Eigen::VectorXd midy = 0.5 * (y1 + y2);
      CHECK(bil.value(x1, midy, xi) >=
            0.5 * (bil.value(x1, y1, xi) + bil.value(x1, y2, xi)) - 1e-12);
    }
  }
}
