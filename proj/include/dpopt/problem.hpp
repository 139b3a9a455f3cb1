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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dpopt {

// Thrown when an operation exists but does not apply to the given problem
// family (e.g. closed-form oracles requested for a custom loss).
class NotSupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An ordered collection of i.i.d. sample vectors; the unit of privacy.
// Samples are stored as columns.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(Eigen::MatrixXd columns);

  int dimension() const { return static_cast<int>(data_.rows()); }
  int size() const { return static_cast<int>(data_.cols()); }
  Eigen::VectorXd sample(int i) const { return data_.col(i); }
  const Eigen::MatrixXd& columns() const { return data_; }
  Eigen::VectorXd mean() const { return data_.rowwise().mean(); }
  double max_norm() const;

  // Returns a copy with sample `index` replaced.
  SampleSet with_sample(int index, const Eigen::VectorXd& value) const;

 private:
  Eigen::MatrixXd data_;
};

// Plain-text matrix format: one sample per line, whitespace-separated
// decimals. Blank lines are skipped.
SampleSet read_sampleset(std::istream& in);
SampleSet load_sampleset(const std::string& path);
void write_sampleset(std::ostream& out, const SampleSet& samples);

// Closed Euclidean ball {v : ||v - center|| <= radius}.
struct BallDomain {
  Eigen::VectorXd center;
  double radius = 0;

  BallDomain() = default;
  BallDomain(Eigen::VectorXd c, double r);
  static BallDomain origin(int dim, double radius);

  int dimension() const { return static_cast<int>(center.size()); }
  bool contains(const Eigen::VectorXd& point, double slack = 1e-12) const;
};

// Euclidean projection onto the ball. Interior points are returned
// unchanged; exterior points are scaled radially onto the boundary.
Eigen::VectorXd project(const BallDomain& domain, const Eigen::VectorXd& point);

struct MinConstants {
  double lipschitz = 0;  // L
  double smooth = 0;     // l
  double strong = 0;     // mu, 0 for merely convex
};

enum class MinFamily { kQuadratic, kLogistic, kCustom };

// Finite-sum minimization problem with caller-certified constants.
// Oracles must be pure functions of their arguments; descriptors are
// immutable after construction and safe to share across threads.
struct MinProblem {
  SampleSet samples;
  BallDomain domain;
  MinConstants constants;
  MinFamily family = MinFamily::kCustom;
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> loss;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      grad;

  int dimension() const { return domain.dimension(); }
  int n() const { return samples.size(); }

  // Same oracles, domain and certified constants over a different sample
  // subset (constants certified on the full set stay valid upper bounds).
  MinProblem with_samples(SampleSet subset) const;
};

struct MinimaxConstants {
  double lipschitz = 0;  // L, joint over (x, y)
  double smooth = 0;     // l, joint
  double mu_x = 0;
  double mu_y = 0;
};

enum class MinimaxFamily { kBilinearQuadratic, kCustom };

// Finite-sum convex-concave saddle problem. Sample vectors are flat
// encodings; for the bilinear family, xi_i = (vec(A_i) row-major, b_i).
struct MinimaxProblem {
  SampleSet samples;
  BallDomain domain_x;
  BallDomain domain_y;
  MinimaxConstants constants;
  MinimaxFamily family = MinimaxFamily::kCustom;
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&,
                       const Eigen::VectorXd&)>
      value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      grad_x;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                const Eigen::VectorXd&)>
      grad_y;

  int dx() const { return domain_x.dimension(); }
  int dy() const { return domain_y.dimension(); }
  int n() const { return samples.size(); }

  MinimaxProblem with_samples(SampleSet subset) const;
};

// f(x; xi) = (mu/2) ||x - xi||^2. The empirical minimizer is the projection
// of the sample mean.
MinProblem make_quadratic_min_problem(SampleSet samples, double mu,
                                      BallDomain domain);

// f(x; (a, b)) = log(1 + exp(-b <a, x>)) + (ridge/2) ||x||^2 with labels
// b in {-1, +1} stored as the last coordinate of each sample.
MinProblem make_logistic_min_problem(SampleSet features_and_labels,
                                     BallDomain domain, double ridge);

// f(x, y; xi_i) = (mu_x/2)||x||^2 + y^T (A_i x - b_i) - (mu_y/2)||y||^2.
MinimaxProblem make_bilinear_saddle_problem(
    const std::vector<Eigen::MatrixXd>& a_stack,
    const std::vector<Eigen::VectorXd>& b_stack, double mu_x, double mu_y,
    BallDomain domain_x, BallDomain domain_y);

// Decodes one flat bilinear sample into (A_i, b_i).
void decode_bilinear_sample(const Eigen::VectorXd& xi, int dx, int dy,
                            Eigen::MatrixXd& a_out, Eigen::VectorXd& b_out);

// Sample means (A-bar, b-bar) of a bilinear problem.
void bilinear_means(const MinimaxProblem& problem, Eigen::MatrixXd& a_mean,
                    Eigen::VectorXd& b_mean);

// Block sizes for K disjoint contiguous blocks: floor(n/K) each, remainder
// folded into the last block.
std::vector<int> partition_sizes(int n, int k);
std::vector<SampleSet> partition_disjoint(const SampleSet& samples, int k);

double empirical_value(const MinProblem& problem, const Eigen::VectorXd& x);
Eigen::VectorXd empirical_grad(const MinProblem& problem,
                               const Eigen::VectorXd& x);

double empirical_value(const MinimaxProblem& problem, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y);
Eigen::VectorXd empirical_grad_x(const MinimaxProblem& problem,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);
Eigen::VectorXd empirical_grad_y(const MinimaxProblem& problem,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);

}  // namespace dpopt
