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

#include <doctest.h>

#include "dpopt/families.hpp"
#include "dpopt/framework.hpp"
#include "dpopt/oracle.hpp"

using namespace dpopt;

TEST_CASE("noise formulas: Algorithm 1 substitution") {
  // L = 1, mu = 1, n = 100, eps = 1, delta = 2.5 e^-2:
  // sigma = 4 sqrt(2 * 2) / 100 = 0.08.
  CHECK(sc_min_sigma(1.0, 1.0, 100, 1.0, 2.5 * std::exp(-2.0)) ==
        doctest::Approx(0.08).epsilon(1e-14));
  // gamma = delta^2 L^2 / (32 mu n^2).
  const double delta = 1e-3;
  CHECK(sc_min_gamma(2.0, 4.0, 10, delta) ==
        doctest::Approx(delta * delta * 4.0 / (32.0 * 4.0 * 100.0)));
}

TEST_CASE("noise formulas: SC-SC scales and their ratio") {
  // L=1, n=100, eps=1, delta=0.05, mu_x=1, mu_y=4 -> mu=1,
  // sigma_x = (8/100) sqrt(2 log 100), sigma_y = sigma_x / 2.
  const double sx = scsc_sigma(1.0, 1.0, 1.0, 100, 1.0, 0.05);
  const double sy = scsc_sigma(1.0, 4.0, 1.0, 100, 1.0, 0.05);
  CHECK(sx == doctest::Approx(0.08 * std::sqrt(2.0 * std::log(100.0)))
                  .epsilon(1e-14));
  CHECK(sy == doctest::Approx(0.5 * sx).epsilon(1e-14));
}

TEST_CASE("noise formulas: scale as 1/eps and 1/n exactly") {
  const double base = sc_min_sigma(2.0, 1.5, 100, 0.4, 1e-4);
  CHECK(sc_min_sigma(2.0, 1.5, 100, 0.2, 1e-4) ==
        doctest::Approx(2.0 * base).epsilon(1e-15));
  CHECK(sc_min_sigma(2.0, 1.5, 200, 0.4, 1e-4) ==
        doctest::Approx(0.5 * base).epsilon(1e-15));
  const double ccs = cc_phase_sigma(1.0, 2.0, 0.5, 50, 0.4, 1e-4);
  CHECK(cc_phase_sigma(1.0, 2.0, 0.5, 50, 0.2, 1e-4) ==
        doctest::Approx(2.0 * ccs).epsilon(1e-15));
}

TEST_CASE("default_mu: branch maximum and linear scaling") {
  const PrivacyBudget budget(0.5, 1e-5);
  const int n = 10000;
  const int d = 1;
  const double b1 = 1.0 / std::sqrt(static_cast<double>(n));
  const double b2 = 14.0 * std::log(static_cast<double>(n)) *
                    std::sqrt(d * std::log(2.5 / budget.delta)) /
                    (n * budget.epsilon);
  CHECK(default_mu(1.0, 1.0, n, d, budget, ScheduleMode::convex_min()) ==
        doctest::Approx(std::max(b1, b2)).epsilon(1e-14));
  // Linear in L/D.
  CHECK(default_mu(3.0, 1.5, n, d, budget, ScheduleMode::convex_min()) ==
        doctest::Approx(2.0 * std::max(b1, b2)).epsilon(1e-14));
  // Large n, small d: the 2/sqrt(n) branch dominates the convex-concave mode.
  const int big = 1 << 20;
  CHECK(default_mu(1.0, 1.0, big, 1, budget, ScheduleMode::convex_concave()) ==
        doctest::Approx(2.0 / std::sqrt(static_cast<double>(big))).epsilon(1e-12));
}

TEST_CASE("make_phase_schedule: structure") {
  const PrivacyBudget budget(0.5, 1e-3);
  const PhaseSchedule s16 =
      make_phase_schedule(16, 1.0, 1.0, budget, ScheduleMode::convex_min());
  CHECK(s16.phases == 4);
  CHECK(s16.block_sizes == std::vector<int>{4, 4, 4, 4});
  CHECK(s16.mu_k == std::vector<double>{2, 4, 8, 16});

  const PhaseSchedule s1024 =
      make_phase_schedule(1024, 0.25, 1.0, budget, ScheduleMode::convex_min());
  CHECK(s1024.phases == 10);
  CHECK(s1024.block_sizes.front() == 102);
  CHECK(s1024.block_sizes.back() == 106);
  CHECK(s1024.mu_k.back() <= 0.25 * 1024 + 1e-12);

  // gamma halves when mu_k doubles at fixed block size; sigma strictly
  // decreases across phases.
  for (int k = 1; k < s16.phases; ++k) {
    CHECK(s16.gamma_k[k] == doctest::Approx(0.5 * s16.gamma_k[k - 1]));
    CHECK(s16.sigma_k[k] < s16.sigma_k[k - 1]);
  }
  CHECK_THROWS_AS(
      make_phase_schedule(3, 1.0, 1.0, budget, ScheduleMode::convex_min()),
      std::invalid_argument);
}

TEST_CASE("make_phase_schedule: cc sigma ratio is 1/sqrt(2) on equal blocks") {
  const PrivacyBudget budget(0.5, 1e-3);
  const PhaseSchedule s =
      make_phase_schedule(16, 1.0, 1.0, budget, ScheduleMode::convex_concave());
  for (int k = 1; k < s.phases; ++k) {
    CHECK(s.sigma_k[k] / s.sigma_k[k - 1] ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("dp_sc_minimize: no-noise mode returns the solver output") {
  RngStream stream(103);
  QuadraticFamily family;
  MinProblem p = family.draw_problem(64, stream);
  const PrivacyBudget budget(0.5, 1e-3);
  MinSolverSpec base;
  DpRunOptions options;
  options.noise = NoiseMode::kNone;
  const DpRunOutput out = dp_sc_minimize(p, budget, base, 5, options);
  CHECK((*out.x - *out.pre_noise_x).norm() == 0.0);
  const PrivacyTotal total = out.ledger.total();
  CHECK(total.non_private);
  CHECK(total.epsilon == doctest::Approx(0.5));
  CHECK(total.delta == doctest::Approx(1e-3));
}

TEST_CASE("dp_sc_minimize: noise magnitude matches d sigma^2") {
  RngStream stream(107);
  QuadraticFamily family;
  family.dim = 4;
  MinProblem p = family.draw_problem(64, stream);
  const PrivacyBudget budget(0.5, 1e-3);
  MinSolverSpec base;
  const double sigma = sc_min_sigma(p.constants.lipschitz, p.constants.strong,
                                    p.n(), budget.epsilon, budget.delta);
  double total = 0;
  const int runs = 1000;
  for (int s = 0; s < runs; ++s) {
    const DpRunOutput out = dp_sc_minimize(p, budget, base, 50000 + s);
    total += (*out.x - *out.pre_noise_x).squaredNorm();
  }
  const double mean = total / runs;
  CHECK(std::abs(mean - 4.0 * sigma * sigma) <= 0.1 * 4.0 * sigma * sigma);
}

TEST_CASE("dp_convex_minimize_phased: anchors chain and ledger is parallel") {
  RngStream stream(109);
  QuadraticFamily family;
  MinProblem p = family.draw_problem(16, stream);
  const PrivacyBudget budget(0.5, 1e-2);
  MinSolverSpec base;
  const DpRunOutput out = dp_convex_minimize_phased(p, budget, base, 77);
  REQUIRE(out.trace.size() == 4);
  for (std::size_t k = 1; k < out.trace.size(); ++k) {
    const Eigen::VectorXd& prev = out.trace[k - 1].noised;
    const Eigen::VectorXd& anchor = out.trace[k].anchor;
    REQUIRE(prev.size() == anchor.size());
    for (int i = 0; i < prev.size(); ++i) CHECK(prev[i] == anchor[i]);
    CHECK(out.trace[k].mu_k == doctest::Approx(2.0 * out.trace[k - 1].mu_k));
  }
  const PrivacyTotal total = out.ledger.total();
  CHECK(total.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(total.delta == doctest::Approx(1e-2).epsilon(1e-15));
  CHECK(out.ledger.entries().size() == 4);

  // No sample index appears in two phases: partition ids are distinct and
  // block sizes cover n.
  int covered = 0;
  for (const auto& t : out.trace) covered += t.block_size;
  CHECK(covered == 16);
}

TEST_CASE("dp_scsc_saddle: symmetric scales and exact ledger") {
  RngStream stream(113);
  BilinearFamily family;
  MinimaxProblem p = family.draw_problem(32, stream);
  const PrivacyBudget budget(0.5, 1e-2);
  MinimaxSolverSpec base;
  const DpRunOutput out = dp_scsc_saddle(p, budget, base, 21);
  REQUIRE(out.trace.size() == 2);
  CHECK(out.trace[0].sigma == doctest::Approx(out.trace[1].sigma));
  const PrivacyTotal total = out.ledger.total();
  CHECK(total.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(total.delta == doctest::Approx(1e-2).epsilon(1e-15));

  DpRunOptions quiet;
  quiet.noise = NoiseMode::kNone;
  const DpRunOutput clean = dp_scsc_saddle(p, budget, base, 21, quiet);
  const OracleSolution saddle = exact_saddle_bilinear(p);
  CHECK((*clean.x - saddle.x).norm() <= 1e-4);
  CHECK((*clean.y - *saddle.y).norm() <= 1e-4);
}

TEST_CASE("dp_cc_saddle halves: ledgers and role swap symmetry") {
  RngStream stream(127);
  BilinearFamily family;
  family.mu_x = 0.0;
  family.mu_y = 0.0;
  MinimaxProblem p = family.draw_problem(16, stream);
  const PrivacyBudget budget(0.5, 1e-2);
  MinimaxSolverSpec base;

  const DpRunOutput primal = dp_cc_saddle_primal(p, budget, base, 31);
  const PrivacyTotal pt = primal.ledger.total();
  CHECK(pt.epsilon == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(pt.delta == doctest::Approx(5e-3).epsilon(1e-15));
  CHECK(primal.x.has_value());
  CHECK_FALSE(primal.y.has_value());

  const DpRunOutput dual = dp_cc_saddle_dual(p, budget, base, 31);
  const PrivacyTotal dt = dual.ledger.total();
  CHECK(dt.epsilon == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(dual.y.has_value());
  CHECK_FALSE(dual.x.has_value());

  // Same schedule on both sides for symmetric domains: sigma_k match and
  // the sigma ratio between phases is 1/sqrt(2).
  REQUIRE(primal.trace.size() == dual.trace.size());
  for (std::size_t k = 0; k < primal.trace.size(); ++k) {
    CHECK(primal.trace[k].sigma == doctest::Approx(dual.trace[k].sigma));
    CHECK(primal.trace[k].variable == 'x');
    CHECK(dual.trace[k].variable == 'y');
  }

  const DpRunOutput pair = dp_cc_saddle(p, budget, base, 31);
  const PrivacyTotal tt = pair.ledger.total();
  CHECK(tt.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tt.delta == doctest::Approx(1e-2).epsilon(1e-15));
  CHECK(pair.x.has_value());
  CHECK(pair.y.has_value());
  CHECK(duality_gap_exact(p, *pair.x_projected, *pair.y_projected) >= -1e-9);
}

TEST_CASE("dp_cc_saddle: no-noise pair is near the final regularized saddles") {
  RngStream stream(131);
  BilinearFamily family;
  family.mu_x = 0.0;
  family.mu_y = 0.0;
  MinimaxProblem p = family.draw_problem(16, stream);
  const PrivacyBudget budget(0.5, 1e-2);
  MinimaxSolverSpec base;
  DpRunOptions quiet;
  quiet.noise = NoiseMode::kNone;
  const DpRunOutput out = dp_cc_saddle(p, budget, base, 41, quiet);

  // Rebuild the primal final-phase regularized problem and compare with the
  // exact oracle of that phase.
  const PhaseTrace& last_primal = out.trace[3];
  REQUIRE(last_primal.variable == 'x');
  const auto blocks = partition_disjoint(p.samples, 4);
  ProxRegularizer reg;
  reg.mu_x_reg = last_primal.mu_k;
  reg.anchor_x = last_primal.anchor;
  const double mu = last_primal.mu_k / std::ldexp(1.0, 4);
  reg.mu_y_reg = mu;
  reg.anchor_y = Eigen::VectorXd::Zero(2);
  const OracleSolution saddle =
      exact_saddle_bilinear(p.with_samples(blocks[3]), reg);
  CHECK((*out.x - saddle.x).norm() <= 1e-3);
}

TEST_CASE("dp_csc_saddle: routing threshold and oracle proximity") {
  RngStream stream(137);
  BilinearFamily family;
  family.mu_x = 0.0;
  family.mu_y = 1.0;
  MinimaxProblem p = family.draw_problem(32, stream);
  const PrivacyBudget budget(0.5, 1e-2);
  MinimaxSolverSpec base;

  // mu_y = 1 is far above L/(D sqrt(n)) here.
  DpRunOptions quiet;
  quiet.noise = NoiseMode::kNone;
  const DpRunOutput out = dp_csc_saddle(p, budget, base, 51, quiet);
  CHECK(out.x.has_value());
  CHECK_FALSE(out.y.has_value());
  const PrivacyTotal total = out.ledger.total();
  CHECK(total.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(total.delta == doctest::Approx(1e-2).epsilon(1e-15));

  // Below the threshold the call must route to dp_cc_saddle.
  BilinearFamily weak = family;
  weak.mu_y = 1e-6;
  MinimaxProblem q = weak.draw_problem(32, stream);
  CHECK_THROWS_AS(dp_csc_saddle(q, budget, base, 52), RoutingError);
}

TEST_CASE("dp_csc_saddle: csc sigma formula resolves the min") {
  // mu_y >= mu_k: min{mu_k, mu_y} = mu_k.
  const double s = csc_phase_sigma(1.0, 2.0, 100.0, 10, 0.5, 1e-3);
  CHECK(s == doctest::Approx(4.0 * std::sqrt(2.0 * std::log(2.5 / 1e-3)) /
                             (2.0 * 10 * 0.5))
                 .epsilon(1e-14));
}

TEST_CASE("base solver sensitivity headroom over neighboring datasets") {
  RngStream stream(139);
  QuadraticFamily family;
  const int n = 50;
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    SampleSet s = family.draw(n, stream);
    SampleSet s_prime =
        s.with_sample(stream.uniform_int(n), family.draw(1, stream).sample(0));
    MinProblem p = family.make_problem(s);
    MinProblem p_prime = family.make_problem(s_prime);
    MinSolverSpec spec;
    spec.kind = MinSolverKind::kSvrg;
    spec.target_gamma = sc_min_gamma(p.constants.lipschitz, family.mu, n, 1e-3);
    spec.seed = 777;  // matched solver seed across the pair
    const Eigen::VectorXd a = solve_min(p, spec).point;
    const Eigen::VectorXd b = solve_min(p_prime, spec).point;
    const double lipschitz =
        std::max(p.constants.lipschitz, p_prime.constants.lipschitz);
    CHECK((a - b).norm() <= 4.0 * lipschitz / (family.mu * n));
    ++checked;
  }
  CHECK(checked == 200);
}
