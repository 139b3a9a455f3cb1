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

#include "dpopt/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "dpopt/solvers_min.hpp"

namespace dpopt {
namespace {

constexpr double kProbeSlack = 1e-9;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

StabilityReport stability_probe_min(const QuadraticFamily& family, int n,
                                    int trials, RngStream& stream,
                                    std::optional<double> reg_modulus) {
  if (trials < 1) throw std::invalid_argument("stability probe: trials >= 1");
  StabilityReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    SampleSet s = family.draw(n, stream);
    const int swap = stream.uniform_int(n);
    SampleSet s_prime =
        s.with_sample(swap, family.draw(1, stream).sample(0));
    MinProblem p = family.make_problem(s);
    MinProblem p_prime = family.make_problem(s_prime);

    std::optional<QuadraticRegularizer> reg;
    double mu_bound = family.mu;
    if (reg_modulus) {
      reg = QuadraticRegularizer{
          *reg_modulus,
          stream.uniform_ball(family.dim, 0.5 * family.domain_radius)};
      mu_bound = *reg_modulus;
    }
    const Eigen::VectorXd xs = exact_min_quadratic(p, reg).x;
    const Eigen::VectorXd xs_prime = exact_min_quadratic(p_prime, reg).x;
    const double lipschitz =
        std::max(p.constants.lipschitz, p_prime.constants.lipschitz);
    const double bound = 2.0 * lipschitz / (mu_bound * n);
    const double shift = (xs - xs_prime).norm();
    report.max_observed = std::max(report.max_observed, shift);
    report.bound = std::max(report.bound, bound);
    if (shift > bound + kProbeSlack) ++report.violations;
  }
  return report;
}

StabilityReport stability_probe_min(const LogisticFamily&, int, int, RngStream&,
                                    std::optional<double>) {
  throw NotSupportedError(
      "stability_probe_min: logistic family has no exact oracle");
}

StabilityReport stability_probe_minimax(
    const BilinearFamily& family, int n, int trials, RngStream& stream,
    std::optional<std::pair<double, double>> reg_moduli) {
  if (trials < 1) throw std::invalid_argument("stability probe: trials >= 1");
  StabilityReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    SampleSet s = family.draw(n, stream);
    const int swap = stream.uniform_int(n);
    SampleSet s_prime = s.with_sample(swap, family.draw(1, stream).sample(0));
    MinimaxProblem p = family.make_problem(s);
    MinimaxProblem p_prime = family.make_problem(s_prime);

    std::optional<ProxRegularizer> reg;
    double alpha = 0;
    double beta = 0;
    if (reg_moduli) {
      alpha = reg_moduli->first;
      beta = reg_moduli->second;
      ProxRegularizer r;
      r.mu_x_reg = alpha;
      r.mu_y_reg = beta;
      r.anchor_x = stream.uniform_ball(family.dx, 0.5 * family.domain_radius_x);
      r.anchor_y = stream.uniform_ball(family.dy, 0.5 * family.domain_radius_y);
      reg = std::move(r);
    }
    const double mu_x = family.mu_x + alpha;
    const double mu_y = family.mu_y + beta;
    const double mu_min = std::min(mu_x, mu_y);
    if (!(mu_min > 0)) {
      throw std::invalid_argument(
          "stability_probe_minimax: effective moduli must be positive");
    }

    const OracleSolution sol = exact_saddle_bilinear(p, reg);
    const OracleSolution sol_prime = exact_saddle_bilinear(p_prime, reg);
    if (!sol.interior || !sol_prime.interior) {
      throw std::runtime_error(
          "stability_probe_minimax: saddle left the domain interior; "
          "enlarge the family's domain radii");
    }
    const double lipschitz =
        std::max(p.constants.lipschitz, p_prime.constants.lipschitz);
    const double bound =
        4.0 * lipschitz * lipschitz / (mu_min * static_cast<double>(n) * n);
    const double shift = mu_x * (sol.x - sol_prime.x).squaredNorm() +
                         mu_y * (*sol.y - *sol_prime.y).squaredNorm();
    report.max_observed = std::max(report.max_observed, shift);
    report.bound = std::max(report.bound, bound);
    if (shift > bound + kProbeSlack) ++report.violations;
  }
  return report;
}

double excess_population_risk(const QuadraticFamily& family,
                              const Eigen::VectorXd& x) {
  return family.population_excess_risk(x);
}

RiskEstimate excess_population_risk(const QuadraticFamily& family,
                                    const Eigen::VectorXd& x,
                                    const SampleSet& holdout, int training_n) {
  RiskEstimate est;
  est.holdout_warning = holdout.size() < 10 * training_n;
  const Eigen::VectorXd m = family.mean();
  double total = 0;
  for (int i = 0; i < holdout.size(); ++i) {
    const Eigen::VectorXd xi = holdout.sample(i);
    total += 0.5 * family.mu * ((x - xi).squaredNorm() - (m - xi).squaredNorm());
  }
  est.value = total / holdout.size();
  return est;
}

RiskEstimate excess_population_risk(const LogisticFamily& family,
                                    const Eigen::VectorXd& x,
                                    const SampleSet& holdout, int training_n) {
  RiskEstimate est;
  est.holdout_warning = holdout.size() < 10 * training_n;
  MinProblem holdout_problem = family.make_problem(holdout);
  // Large-holdout minimizer as the reference optimum; a tiny anchor keeps
  // the subproblem strongly convex when the family has no ridge.
  MinSolverSpec spec;
  spec.kind = MinSolverKind::kSvrg;
  spec.target_gamma = 1e-10;
  spec.seed = 0x5eedf00d;
  std::optional<QuadraticRegularizer> reg;
  if (!(holdout_problem.constants.strong > 0)) {
    reg = QuadraticRegularizer{1e-6,
                               Eigen::VectorXd::Zero(holdout_problem.dimension())};
  }
  const Eigen::VectorXd reference = solve_min(holdout_problem, spec, reg).point;
  est.value =
      empirical_value(holdout_problem, x) - empirical_value(holdout_problem, reference);
  return est;
}

double weak_gap_estimate(const BilinearFamily& family, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) {
  return family.population_weak_gap(x, y);
}

double weak_gap_estimate(const BilinearFamily& family, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const SampleSet& holdout) {
  Eigen::MatrixXd a_mean;
  Eigen::VectorXd b_mean;
  decode_bilinear_sample(holdout.mean(), family.dx, family.dy, a_mean, b_mean);
  return bilinear_quadratic_gap(a_mean, b_mean, family.mu_x, family.mu_y,
                                family.domain_x(), family.domain_y(), x, y);
}

const char* const kUtilityCsvHeader =
    "kind,family,n,d,epsilon,delta,solver,seed,repetition,"
    "excess_empirical_risk,excess_population_risk,empirical_gap,weak_gap,"
    "gradient_evals,status,wall_time_ms";

const char* const kAggregateCsvHeader =
    "kind,family,n,d,epsilon,delta,solver,repetitions,"
    "mean_excess_population_risk,se_excess_population_risk,"
    "mean_weak_gap,se_weak_gap,"
    "mean_excess_empirical_risk,se_excess_empirical_risk,stderr_defined";

void write_utility_csv_row(std::ostream& out, const UtilityRecord& r) {
  out << r.kind << "," << r.family << "," << r.n << "," << r.dim << ","
      << fmt(r.epsilon) << "," << fmt(r.delta) << "," << r.solver << ","
      << r.seed << "," << r.repetition << "," << fmt(r.excess_empirical_risk)
      << "," << fmt(r.excess_population_risk) << "," << fmt(r.empirical_gap)
      << "," << fmt(r.weak_gap) << "," << r.gradient_evals << "," << r.status
      << "," << fmt(r.wall_time_ms) << "\n";
}

void write_utility_jsonl_row(std::ostream& out, const UtilityRecord& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["family"] = r.family;
  j["n"] = r.n;
  j["d"] = r.dim;
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  j["solver"] = r.solver;
  j["seed"] = r.seed;
  j["repetition"] = r.repetition;
  j["excess_empirical_risk"] = r.excess_empirical_risk;
  j["excess_population_risk"] = r.excess_population_risk;
  j["empirical_gap"] = r.empirical_gap;
  j["weak_gap"] = r.weak_gap;
  j["gradient_evals"] = r.gradient_evals;
  j["status"] = r.status;
  j["wall_time_ms"] = r.wall_time_ms;
  out << j.dump() << "\n";
}

void write_aggregate_csv_row(std::ostream& out, const UtilityAggregate& a) {
  out << a.kind << "," << a.family << "," << a.n << "," << a.dim << ","
      << fmt(a.epsilon) << "," << fmt(a.delta) << "," << a.solver << ","
      << a.repetitions << "," << fmt(a.mean_excess_population_risk) << ","
      << fmt(a.se_excess_population_risk) << "," << fmt(a.mean_weak_gap) << ","
      << fmt(a.se_weak_gap) << "," << fmt(a.mean_excess_empirical_risk) << ","
      << fmt(a.se_excess_empirical_risk) << ","
      << (a.stderr_defined ? "true" : "false") << "\n";
}

std::vector<UtilityRecord> utility_sweep(int config_count, int repetitions,
                                         int jobs, const SweepRunFn& run_one) {
  if (config_count < 1 || repetitions < 1) {
    throw std::invalid_argument("utility_sweep: empty grid");
  }
  const int total = config_count * repetitions;
  std::vector<UtilityRecord> records(total);
  std::atomic<int> next{0};
  const int workers = std::max(1, std::min(jobs, total));

  auto work = [&]() {
    while (true) {
      const int cell = next.fetch_add(1);
      if (cell >= total) return;
      const int config_index = cell / repetitions;
      const int repetition = cell % repetitions;
      try {
        records[cell] = run_one(config_index, repetition);
      } catch (const std::exception& e) {
        UtilityRecord failed;
        failed.repetition = repetition;
        failed.status = std::string("failed: ") + e.what();
        records[cell] = std::move(failed);
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return records;
}

namespace {

struct Welford {
  int count = 0;
  double mean = 0;
  double m2 = 0;
  void add(double v) {
    if (std::isnan(v)) return;
    ++count;
    const double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }
  double se() const {
    if (count < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(m2 / (count - 1) / count);
  }
  double value() const {
    return count ? mean : std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace

std::vector<UtilityAggregate> aggregate_records(
    const std::vector<UtilityRecord>& records) {
  using Key = std::tuple<std::string, std::string, int, int, double, double,
                         std::string>;
  struct Acc {
    Welford population;
    Welford weak;
    Welford empirical;
    int repetitions = 0;
  };
  std::map<Key, Acc> groups;
  for (const UtilityRecord& r : records) {
    if (r.status.rfind("ok", 0) != 0) continue;
    Acc& a = groups[{r.kind, r.family, r.n, r.dim, r.epsilon, r.delta, r.solver}];
    a.population.add(r.excess_population_risk);
    a.weak.add(r.weak_gap);
    a.empirical.add(r.excess_empirical_risk);
    ++a.repetitions;
  }
  std::vector<UtilityAggregate> out;
  for (const auto& [key, acc] : groups) {
    UtilityAggregate a;
    std::tie(a.kind, a.family, a.n, a.dim, a.epsilon, a.delta, a.solver) = key;
    a.repetitions = acc.repetitions;
    a.mean_excess_population_risk = acc.population.value();
    a.se_excess_population_risk = acc.population.se();
    a.mean_weak_gap = acc.weak.value();
    a.se_weak_gap = acc.weak.se();
    a.mean_excess_empirical_risk = acc.empirical.value();
    a.se_excess_empirical_risk = acc.empirical.se();
    a.stderr_defined = acc.repetitions > 1;
    out.push_back(std::move(a));
  }
  return out;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("loglog_slope: need >= 2 matched points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(xs.size());
  for (int i = 0; i < m; ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0)) {
      throw std::invalid_argument("loglog_slope: positive values required");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace dpopt
