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

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dpopt/families.hpp"
#include "dpopt/oracle.hpp"
#include "dpopt/problem.hpp"
#include "dpopt/rng.hpp"

namespace dpopt {

struct StabilityReport {
  int trials = 0;
  double max_observed = 0;   // shift (min) or weighted squared shift (minimax)
  double bound = 0;
  int violations = 0;
};

// Draws `trials` neighboring dataset pairs (one uniformly chosen sample
// replaced by a fresh draw), computes exact empirical optima, and checks
// the shift against 2L/(mu n). With `reg_modulus` set, each trial anchors a
// quadratic regularizer at a random point and the bound uses the
// regularizer modulus alone.
StabilityReport stability_probe_min(const QuadraticFamily& family, int n,
                                    int trials, RngStream& stream,
                                    std::optional<double> reg_modulus = {});
StabilityReport stability_probe_min(const LogisticFamily& family, int n,
                                    int trials, RngStream& stream,
                                    std::optional<double> reg_modulus = {});

// Minimax analogue: weighted squared shift
// mu_x ||dx||^2 + mu_y ||dy||^2 <= 4 L^2 / (mu n^2), effective moduli
// including optional anchor regularizers (random anchors per trial).
StabilityReport stability_probe_minimax(
    const BilinearFamily& family, int n, int trials, RngStream& stream,
    std::optional<std::pair<double, double>> reg_moduli = {});

struct RiskEstimate {
  double value = 0;
  bool holdout_warning = false;  // holdout smaller than 10x the training set
};

// Exact excess population risk for the quadratic family.
double excess_population_risk(const QuadraticFamily& family,
                              const Eigen::VectorXd& x);

// Holdout estimate: mean holdout loss at x minus the holdout loss at the
// known population optimum (quadratic) or at the holdout ERM solution
// (logistic).
RiskEstimate excess_population_risk(const QuadraticFamily& family,
                                    const Eigen::VectorXd& x,
                                    const SampleSet& holdout, int training_n);
RiskEstimate excess_population_risk(const LogisticFamily& family,
                                    const Eigen::VectorXd& x,
                                    const SampleSet& holdout, int training_n);

// Weak duality gap of the population (or holdout-mean) objective.
double weak_gap_estimate(const BilinearFamily& family, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y);
double weak_gap_estimate(const BilinearFamily& family, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const SampleSet& holdout);

struct UtilityRecord {
  std::string kind;
  std::string family;
  int n = 0;
  int dim = 0;
  double epsilon = 0;
  double delta = 0;
  std::string solver;
  std::uint64_t seed = 0;
  int repetition = 0;
  double excess_empirical_risk = std::numeric_limits<double>::quiet_NaN();
  double excess_population_risk = std::numeric_limits<double>::quiet_NaN();
  double empirical_gap = std::numeric_limits<double>::quiet_NaN();
  double weak_gap = std::numeric_limits<double>::quiet_NaN();
  long gradient_evals = 0;
  std::string status = "ok";
  double wall_time_ms = 0;
};

struct UtilityAggregate {
  std::string kind;
  std::string family;
  int n = 0;
  int dim = 0;
  double epsilon = 0;
  double delta = 0;
  std::string solver;
  int repetitions = 0;
  double mean_excess_population_risk = 0;
  double se_excess_population_risk = 0;
  double mean_weak_gap = 0;
  double se_weak_gap = 0;
  double mean_excess_empirical_risk = 0;
  double se_excess_empirical_risk = 0;
  bool stderr_defined = true;  // false at repetition count 1
};

// Frozen CSV column order; documented in the README.
extern const char* const kUtilityCsvHeader;
extern const char* const kAggregateCsvHeader;

void write_utility_csv_row(std::ostream& out, const UtilityRecord& record);
void write_utility_jsonl_row(std::ostream& out, const UtilityRecord& record);
void write_aggregate_csv_row(std::ostream& out, const UtilityAggregate& agg);

// Runs every (config point, repetition) cell through `run_one` across a
// worker pool; failures are recorded per-record and the sweep continues.
using SweepRunFn = std::function<UtilityRecord(int config_index, int repetition)>;
std::vector<UtilityRecord> utility_sweep(int config_count, int repetitions,
                                         int jobs, const SweepRunFn& run_one);

// Groups records by config echo and reduces to mean +- standard error.
std::vector<UtilityAggregate> aggregate_records(
    const std::vector<UtilityRecord>& records);

// Least-squares slope of log(y) against log(x); trend tests.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace dpopt
