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

#include <cstring>

#include <doctest.h>

#include "dpopt/config.hpp"
#include "dpopt/runner.hpp"

using namespace dpopt;

TEST_CASE("parse_run_config: defaults and auto delta") {
  const RunConfig c = parse_run_config(
      "experiment.kind = sc_min\n"
      "problem.n = 200\n");
  CHECK(c.kind == ExperimentKind::kScMin);
  CHECK(c.n == 200);
  CHECK(c.delta == doctest::Approx(0.5 / 200));
  CHECK(c.delta_auto);
  CHECK(c.family == "quadratic");
}

TEST_CASE("parse_run_config: comments, spacing, duplicate keys") {
  const RunConfig c = parse_run_config(
      "# a comment\n"
      "experiment.kind = convex_min_phased   # trailing comment\n"
      "problem.n= 64\n"
      "   privacy.epsilon =0.25\n");
  CHECK(c.kind == ExperimentKind::kConvexMinPhased);
  CHECK(c.epsilon == doctest::Approx(0.25));

  CHECK_THROWS_AS(parse_run_config("problem.n = 4\nproblem.n = 5\n"), ConfigError);
}

TEST_CASE("parse_run_config: diagnostics cite the field") {
  try {
    parse_run_config("privacy.epsilon = high\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "privacy.epsilon");
    CHECK(std::strstr(e.what(), "privacy.epsilon") != nullptr);
  }

  try {
    parse_run_config("problem.n = 100\nprivacy.delta = 0.02\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "privacy.delta");
    CHECK(std::strstr(e.what(), "(0, 1/n)") != nullptr);
  }
}

TEST_CASE("parse_run_config: kind and family cross checks") {
  CHECK_THROWS_AS(parse_run_config("experiment.kind = scsc_saddle\n"
                                   "problem.family = quadratic\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config("experiment.kind = sc_min\n"
                                   "problem.family = bilinear\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config("experiment.kind = flying\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("solver.kind = newton\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("experiment.kind = utility_sweep\n"
                                   "sweep.kind = utility_sweep\n"),
                  ConfigError);
}

TEST_CASE("parse_run_config: list keys") {
  const RunConfig c = parse_run_config(
      "experiment.kind = utility_sweep\n"
      "sweep.n = 64, 128,256\n"
      "sweep.epsilon = 0.1,0.9\n"
      "sweep.seeds = 5\n");
  CHECK(c.sweep_n == std::vector<int>{64, 128, 256});
  CHECK(c.sweep_epsilon == std::vector<double>{0.1, 0.9});
  CHECK(c.sweep_seeds == 5);
  CHECK_THROWS_AS(parse_run_config("sweep.n = ,\n"), ConfigError);
}

TEST_CASE("config round trip through the echo") {
  const RunConfig c = parse_run_config(
      "experiment.kind = cc_saddle\n"
      "problem.family = bilinear\n"
      "problem.n = 128\n"
      "problem.d = 3\n"
      "problem.mu_x = 0\n"
      "problem.mu_y = 0\n"
      "privacy.epsilon = 0.3\n"
      "run.seed = 99\n"
      "probe.n_list = 25,50\n");
  const RunConfig back = parse_run_config(config_echo(c));
  CHECK(back == c);

  // Explicit delta round-trips too.
  const RunConfig d = parse_run_config(
      "problem.n = 100\n"
      "privacy.delta = 0.001\n");
  CHECK_FALSE(d.delta_auto);
  CHECK(parse_run_config(config_echo(d)) == d);
}
