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

#include "dpopt/evaluation.hpp"
#include "dpopt/framework.hpp"

using namespace dpopt;

TEST_CASE("stability_probe_min: zero violations and 1/n bound scaling") {
  QuadraticFamily family;
  RngStream s1(211);
  const StabilityReport at_n = stability_probe_min(family, 50, 200, s1);
  CHECK(at_n.violations == 0);
  CHECK(at_n.max_observed <= at_n.bound);

  RngStream s2(211);  // matched stream for the doubled size
  const StabilityReport at_2n = stability_probe_min(family, 100, 200, s2);
  CHECK(at_2n.violations == 0);
  CHECK(at_2n.bound <= 0.51 * at_n.bound);  // bound halves (up to data L)
  CHECK(at_2n.max_observed <= at_2n.bound);
}

TEST_CASE("stability_probe_min: regularized bound uses the regularizer") {
  QuadraticFamily family;
  RngStream stream(223);
  const StabilityReport report =
      stability_probe_min(family, 50, 200, stream, 0.5);
  CHECK(report.violations == 0);
}

TEST_CASE("stability_probe_min: logistic family is unsupported") {
  LogisticFamily family;
  RngStream stream(227);
  CHECK_THROWS_AS(stability_probe_min(family, 10, 5, stream), NotSupportedError);
}

TEST_CASE("stability_probe_minimax: zero violations with and without anchors") {
  BilinearFamily family;
  RngStream stream(229);
  const StabilityReport plain = stability_probe_minimax(family, 50, 200, stream);
  CHECK(plain.violations == 0);
  const StabilityReport anchored = stability_probe_minimax(
      family, 50, 200, stream, std::make_pair(1.5, 0.75));
  CHECK(anchored.violations == 0);
}

TEST_CASE("identical datasets shift nothing") {
  RngStream stream(233);
  QuadraticFamily family;
  MinProblem p = family.draw_problem(20, stream);
  const Eigen::VectorXd a = exact_min_quadratic(p).x;
  const Eigen::VectorXd b = exact_min_quadratic(p).x;
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("excess_population_risk: exact quadratic form") {
  QuadraticFamily family;
  const Eigen::VectorXd m = family.mean();
  CHECK(excess_population_risk(family, m) == 0.0);
  Eigen::VectorXd x = m;
  x[0] += 2.0;
  CHECK(excess_population_risk(family, x) ==
        doctest::Approx(0.5 * family.mu * 4.0).epsilon(1e-15));
}

TEST_CASE("excess_population_risk: holdout estimate and warning flag") {
  QuadraticFamily family;
  RngStream stream(239);
  const SampleSet big = family.draw(4000, stream);
  const RiskEstimate at_opt =
      excess_population_risk(family, family.mean(), big, 100);
  CHECK_FALSE(at_opt.holdout_warning);
  CHECK(std::abs(at_opt.value) <= 1e-12);  // exact cancellation at the mean

  Eigen::VectorXd x = family.mean();
  x[0] += 1.0;
  const RiskEstimate off = excess_population_risk(family, x, big, 100);
  CHECK(off.value == doctest::Approx(0.5 * family.mu).epsilon(0.05));

  const SampleSet small = family.draw(50, stream);
  CHECK(excess_population_risk(family, x, small, 100).holdout_warning);
}

TEST_CASE("excess_population_risk: two holdouts agree within 3 SEs") {
  QuadraticFamily family;
  RngStream stream(241);
  Eigen::VectorXd x = family.mean();
  x[0] += 0.7;
  const int m = 2000;
  const SampleSet h1 = family.draw(m, stream);
  const SampleSet h2 = family.draw(m, stream);
  auto estimate = [&](const SampleSet& h, double& se) {
    double sum = 0, sum2 = 0;
    for (int i = 0; i < h.size(); ++i) {
      const Eigen::VectorXd xi = h.sample(i);
      const double v = 0.5 * family.mu *
                       ((x - xi).squaredNorm() - (family.mean() - xi).squaredNorm());
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / m;
    se = std::sqrt((sum2 / m - mean * mean) / m);
    return mean;
  };
  double se1 = 0, se2 = 0;
  const double e1 = estimate(h1, se1);
  const double e2 = estimate(h2, se2);
  CHECK(std::abs(e1 - e2) <= 3.0 * std::sqrt(se1 * se1 + se2 * se2));
  CHECK(e1 == doctest::Approx(
                  excess_population_risk(family, x, h1, 100).value));
}

TEST_CASE("noised output has higher expected risk than the solver output") {
  RngStream stream(251);
  QuadraticFamily family;
  MinProblem p = family.draw_problem(60, stream);
  const PrivacyBudget budget(0.5, 1e-3);
  MinSolverSpec base;
  double noised = 0, clean = 0;
  for (int s = 0; s < 40; ++s) {
    const DpRunOutput out = dp_sc_minimize(p, budget, base, 900 + s);
    noised += excess_population_risk(family, project(p.domain, *out.x));
    clean += excess_population_risk(family, *out.pre_noise_x);
  }
  CHECK(noised / 40 > clean / 40);
}

TEST_CASE("weak_gap_estimate: zero at the population saddle, positive nearby") {
  BilinearFamily family;
  const auto [xs, ys] = family.population_saddle();
  CHECK(weak_gap_estimate(family, xs, ys) <= 1e-9);
  CHECK(weak_gap_estimate(family, xs, ys) >= -1e-9);

  RngStream stream(257);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd x = xs + stream.uniform_ball(2, 0.5);
    const Eigen::VectorXd y = ys + stream.uniform_ball(2, 0.5);
    const double gap = weak_gap_estimate(family, x, y);
    const double lower = 0.5 * family.mu_x * (x - xs).squaredNorm() +
                         0.5 * family.mu_y * (y - ys).squaredNorm();
    CHECK(gap >= lower - 1e-9);
  }
}

TEST_CASE("weak_gap_estimate: holdout variant tracks the population one") {
  BilinearFamily family;
  RngStream stream(263);
  const SampleSet holdout = family.draw(5000, stream);
  const Eigen::VectorXd x = stream.uniform_ball(2, 1.0);
  const Eigen::VectorXd y = stream.uniform_ball(2, 1.0);
  CHECK(weak_gap_estimate(family, x, y, holdout) ==
        doctest::Approx(weak_gap_estimate(family, x, y)).epsilon(0.05));
}

TEST_CASE("matched-seed noise monotonicity") {
  const Eigen::VectorXd p = Eigen::VectorXd::Zero(6);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream a(seed), b(seed);
    const double small = (add_gaussian_noise(p, 0.5, a) - p).norm();
    const double large = (add_gaussian_noise(p, 2.0, b) - p).norm();
    CHECK(small <= large);
  }
}

TEST_CASE("aggregate_records: mean, stderr and the single-rep flag") {
  std::vector<UtilityRecord> records(3);
  for (int i = 0; i < 3; ++i) {
    records[i].kind = "sc_min";
    records[i].family = "quadratic";
    records[i].n = 10;
    records[i].dim = 2;
    records[i].epsilon = 0.5;
    records[i].delta = 1e-3;
    records[i].solver = "svrg";
    records[i].repetition = i;
    records[i].excess_population_risk = 1.0 + i;  // 1, 2, 3
  }
  const auto aggregates = aggregate_records(records);
  REQUIRE(aggregates.size() == 1);
  CHECK(aggregates[0].mean_excess_population_risk == doctest::Approx(2.0));
  // sample std = 1, se = 1/sqrt(3).
  CHECK(aggregates[0].se_excess_population_risk ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(aggregates[0].stderr_defined);

  const auto single = aggregate_records({records[0]});
  REQUIRE(single.size() == 1);
  CHECK_FALSE(single[0].stderr_defined);
  CHECK(std::isnan(single[0].se_excess_population_risk));
}

TEST_CASE("utility_sweep: failures are recorded and the sweep continues") {
  const auto records = utility_sweep(2, 3, 2, [](int config, int rep) {
    if (config == 1 && rep == 1) throw std::runtime_error("boom");
    UtilityRecord r;
    r.kind = "sc_min";
    r.repetition = rep;
    return r;
  });
  REQUIRE(records.size() == 6);
  int failed = 0;
  for (const auto& r : records) {
    if (r.status.rfind("failed", 0) == 0) ++failed;
  }
  CHECK(failed == 1);
}

TEST_CASE("loglog_slope: recovers the exponent of a power law") {
  std::vector<double> xs, ys;
  for (int k = 1; k <= 6; ++k) {
    const double x = std::pow(2.0, k);
    xs.push_back(x);
    ys.push_back(3.0 * std::pow(x, -0.75));
  }
  CHECK(loglog_slope(xs, ys) == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), std::invalid_argument);
}
