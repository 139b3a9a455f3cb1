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
#include <vector>

#include "dpopt/mechanisms.hpp"
#include "dpopt/problem.hpp"
#include "dpopt/solvers_min.hpp"
#include "dpopt/solvers_minimax.hpp"

namespace dpopt {

// Noise scales and base-solver accuracy targets of the output-perturbation
// algorithms. Natural logarithms throughout.
double sc_min_sigma(double lipschitz, double mu, int n, double epsilon,
                    double delta);
double sc_min_gamma(double lipschitz, double mu, int n, double delta);
double phased_min_sigma(double lipschitz, double mu_k, int block, double epsilon,
                        double delta);
double phased_min_gamma(double lipschitz, double mu_k, int block, double delta);
double scsc_sigma(double lipschitz, double mu_side, double mu_min, int n,
                  double epsilon, double delta);
double scsc_gamma(double lipschitz, double mu_min, int n, double delta);
double cc_phase_sigma(double lipschitz, double mu_k, double mu, int block,
                      double epsilon, double delta);
double cc_phase_gamma(double lipschitz, double mu, int block, double delta);
double csc_phase_sigma(double lipschitz, double mu_k, double mu_y, int block,
                       double epsilon, double delta);
double csc_phase_gamma(double lipschitz, double mu_k, double mu_y, int block,
                       double delta);

enum class ScheduleKind { kConvexMin, kConvexConcave, kConvexStronglyConcave };

struct ScheduleMode {
  ScheduleKind kind = ScheduleKind::kConvexMin;
  double mu_y = 0;  // intrinsic strong concavity, C-SC mode only

  static ScheduleMode convex_min() { return {ScheduleKind::kConvexMin, 0}; }
  static ScheduleMode convex_concave() {
    return {ScheduleKind::kConvexConcave, 0};
  }
  static ScheduleMode csc(double mu_y) {
    return {ScheduleKind::kConvexStronglyConcave, mu_y};
  }
};

// The (K, block sizes, mu_k, sigma_k, gamma_k) plan of the phased
// algorithms: K = floor(log2 n), mu_k = mu 2^k, remainder samples folded
// into the last block.
struct PhaseSchedule {
  int phases = 0;               // K
  std::vector<int> block_sizes;
  double mu = 0;                // base regularization modulus
  std::vector<double> mu_k;
  std::vector<double> sigma_k;
  std::vector<double> gamma_k;
};

// Regularization modulus from the utility theorems:
//   ConvexMin: (L/D) max{1/sqrt(n), 14 log(n) sqrt(d log(2.5/delta))/(n eps)}
//   ConvexConcave: (L/D) max{2/sqrt(n), 13 log(n) sqrt(d log(5/delta))/(n eps)}
//   C-SC: 3 (L/D) max{1/sqrt(n), 4 log(n) sqrt(d log(2.5/delta))/(n eps)}
double default_mu(double lipschitz, double radius, int n, int dim,
                  const PrivacyBudget& budget, const ScheduleMode& mode);

PhaseSchedule make_phase_schedule(int n, double mu, double lipschitz,
                                  const PrivacyBudget& budget,
                                  const ScheduleMode& mode);

enum class NoiseMode { kPrivate, kNone };

struct DpRunOptions {
  NoiseMode noise = NoiseMode::kPrivate;
  std::optional<double> mu_override;       // phased algorithms
  std::optional<Eigen::VectorXd> x0;       // default: domain center
  std::optional<Eigen::VectorXd> y0;
};

struct PhaseTrace {
  int phase = 0;
  char variable = 'x';  // which block this phase perturbs
  Eigen::VectorXd anchor;
  Eigen::VectorXd pre_noise;
  Eigen::VectorXd noised;
  Eigen::VectorXd noised_projected;
  double sigma = 0;
  double gamma = 0;
  double mu_k = 0;
  int block_size = 0;
  long gradient_evals = 0;
};

// Output of one private run. The raw outputs are the mechanism outputs
// (noise may leave the domain); projected copies are provided for
// evaluation, projection being privacy-free post-processing. Only the
// perturbed side(s) are set: the dual-half algorithm, for instance,
// privatizes y alone.
struct DpRunOutput {
  std::optional<Eigen::VectorXd> x;
  std::optional<Eigen::VectorXd> x_projected;
  std::optional<Eigen::VectorXd> pre_noise_x;
  std::optional<Eigen::VectorXd> y;
  std::optional<Eigen::VectorXd> y_projected;
  std::optional<Eigen::VectorXd> pre_noise_y;
  PrivacyLedger ledger;
  std::vector<PhaseTrace> trace;
  std::uint64_t seed = 0;
  long gradient_evals = 0;
};

// Output perturbation for strongly-convex minimization: run the base
// solver to gamma = delta^2 L^2 / (32 mu n^2), add Gaussian noise with
// sigma = 4 L sqrt(2 log(2.5/delta)) / (mu n eps).
DpRunOutput dp_sc_minimize(const MinProblem& problem,
                           const PrivacyBudget& budget,
                           const MinSolverSpec& base, std::uint64_t seed,
                           const DpRunOptions& options = {});

// Phased output perturbation for convex minimization: K anchored
// strongly-convex phases over disjoint blocks, parallel composition.
DpRunOutput dp_convex_minimize_phased(const MinProblem& problem,
                                      const PrivacyBudget& budget,
                                      const MinSolverSpec& base,
                                      std::uint64_t seed,
                                      const DpRunOptions& options = {});

// Output perturbation for SC-SC saddle problems; perturbs both blocks with
// per-side scales, two sequential (eps/2, delta/2) mechanisms.
DpRunOutput dp_scsc_saddle(const MinimaxProblem& problem,
                           const PrivacyBudget& budget,
                           const MinimaxSolverSpec& base, std::uint64_t seed,
                           const DpRunOptions& options = {});

// Phased primal half for convex-concave problems: anchor regularizer mu_k
// on x, fixed mu on y, noise on x only; totals (eps/2, delta/2).
DpRunOutput dp_cc_saddle_primal(const MinimaxProblem& problem,
                                const PrivacyBudget& budget,
                                const MinimaxSolverSpec& base,
                                std::uint64_t seed,
                                const DpRunOptions& options = {});

// Role-swapped dual half; perturbs y only; totals (eps/2, delta/2).
DpRunOutput dp_cc_saddle_dual(const MinimaxProblem& problem,
                              const PrivacyBudget& budget,
                              const MinimaxSolverSpec& base, std::uint64_t seed,
                              const DpRunOptions& options = {});

// Composition of the primal and dual halves on independent child streams
// over the same dataset; totals (eps, delta).
DpRunOutput dp_cc_saddle(const MinimaxProblem& problem,
                         const PrivacyBudget& budget,
                         const MinimaxSolverSpec& base, std::uint64_t seed,
                         const DpRunOptions& options = {});

// Convex--strongly-concave variant: no y regularizer, noise on x only.
// Requires mu_y >= L / (D sqrt(n)); smaller values must route to
// dp_cc_saddle.
DpRunOutput dp_csc_saddle(const MinimaxProblem& problem,
                          const PrivacyBudget& budget,
                          const MinimaxSolverSpec& base, std::uint64_t seed,
                          const DpRunOptions& options = {});

// Raised when a problem fails dp_csc_saddle's strong-concavity threshold.
class RoutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dpopt
