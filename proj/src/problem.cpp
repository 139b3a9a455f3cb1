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

#include "dpopt/problem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

namespace dpopt {

SampleSet::SampleSet(Eigen::MatrixXd columns) : data_(std::move(columns)) {
  if (data_.cols() < 1 || data_.rows() < 1) {
    throw std::invalid_argument("SampleSet requires n >= 1 and dimension >= 1");
  }
}

double SampleSet::max_norm() const {
  double m = 0;
  for (int i = 0; i < size(); ++i) m = std::max(m, data_.col(i).norm());
  return m;
}

SampleSet SampleSet::with_sample(int index, const Eigen::VectorXd& value) const {
  if (index < 0 || index >= size()) {
    throw std::invalid_argument("sample index out of range");
  }
  if (value.size() != dimension()) {
    throw std::invalid_argument("replacement sample has wrong dimension");
  }
  Eigen::MatrixXd copy = data_;
  copy.col(index) = value;
  return SampleSet(std::move(copy));
}

SampleSet read_sampleset(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) {
      throw std::invalid_argument("sample file: non-numeric token on line " +
                                  std::to_string(rows.size() + 1));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("sample file: no samples");
  const std::size_t dim = rows.front().size();
  Eigen::MatrixXd data(dim, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw std::invalid_argument("sample file: inconsistent dimension on line " +
                                  std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < dim; ++j) data(j, i) = rows[i][j];
  }
  return SampleSet(std::move(data));
}

SampleSet load_sampleset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sample file: " + path);
  return read_sampleset(in);
}

void write_sampleset(std::ostream& out, const SampleSet& samples) {
  char buf[64];
  for (int i = 0; i < samples.size(); ++i) {
    for (int j = 0; j < samples.dimension(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", samples.columns()(j, i));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

BallDomain::BallDomain(Eigen::VectorXd c, double r)
    : center(std::move(c)), radius(r) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be > 0");
}

BallDomain BallDomain::origin(int dim, double radius) {
  return BallDomain(Eigen::VectorXd::Zero(dim), radius);
}

bool BallDomain::contains(const Eigen::VectorXd& point, double slack) const {
  return (point - center).norm() <= radius + slack;
}

Eigen::VectorXd project(const BallDomain& domain, const Eigen::VectorXd& point) {
  if (point.size() != domain.center.size()) {
    throw std::invalid_argument("project: point dimension mismatch");
  }
  Eigen::VectorXd offset = point - domain.center;
  double norm = offset.norm();
  // The relative shell keeps reprojections of boundary points bit-exact.
  if (norm <= domain.radius * (1.0 + 1e-14)) return point;
  return domain.center + offset * (domain.radius / norm);
}

MinProblem MinProblem::with_samples(SampleSet subset) const {
  if (subset.dimension() != samples.dimension()) {
    throw std::invalid_argument("with_samples: sample dimension mismatch");
  }
  MinProblem copy = *this;
  copy.samples = std::move(subset);
  return copy;
}

MinimaxProblem MinimaxProblem::with_samples(SampleSet subset) const {
  if (subset.dimension() != samples.dimension()) {
    throw std::invalid_argument("with_samples: sample dimension mismatch");
  }
  MinimaxProblem copy = *this;
  copy.samples = std::move(subset);
  return copy;
}

MinProblem make_quadratic_min_problem(SampleSet samples, double mu,
                                      BallDomain domain) {
  if (!(mu > 0)) throw std::invalid_argument("quadratic problem: mu must be > 0");
  if (samples.dimension() != domain.dimension()) {
    throw std::invalid_argument("quadratic problem: dimension mismatch");
  }
  const double sample_radius = samples.max_norm();
  MinProblem p;
  p.samples = std::move(samples);
  p.domain = std::move(domain);
  // sup over the domain of ||mu (x - xi)||.
  p.constants.lipschitz =
      mu * (p.domain.radius + p.domain.center.norm() + sample_radius);
  p.constants.smooth = mu;
  p.constants.strong = mu;
  p.family = MinFamily::kQuadratic;
  p.loss = [mu](const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
    return 0.5 * mu * (x - xi).squaredNorm();
  };
  p.grad = [mu](const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
    return Eigen::VectorXd(mu * (x - xi));
  };
  return p;
}

MinProblem make_logistic_min_problem(SampleSet features_and_labels,
                                     BallDomain domain, double ridge) {
  if (ridge < 0) throw std::invalid_argument("logistic problem: ridge must be >= 0");
  const int d = domain.dimension();
  if (features_and_labels.dimension() != d + 1) {
    throw std::invalid_argument(
        "logistic problem: samples must have dimension d+1 (features, label)");
  }
  double feature_radius = 0;
  for (int i = 0; i < features_and_labels.size(); ++i) {
    Eigen::VectorXd xi = features_and_labels.sample(i);
    const double label = xi[d];
    if (label != 1.0 && label != -1.0) {
      throw std::invalid_argument("logistic problem: labels must be +1 or -1");
    }
    feature_radius = std::max(feature_radius, xi.head(d).norm());
  }
  MinProblem p;
  p.samples = std::move(features_and_labels);
  p.domain = std::move(domain);
  p.constants.lipschitz =
      feature_radius + ridge * (p.domain.radius + p.domain.center.norm());
  p.constants.smooth = feature_radius * feature_radius / 4.0 + ridge;
  p.constants.strong = ridge;
  p.family = MinFamily::kLogistic;
  p.loss = [ridge, d](const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
    const double margin = -xi[d] * xi.head(d).dot(x);
    // log(1 + exp(m)) computed stably.
    const double soft = margin > 0 ? margin + std::log1p(std::exp(-margin))
                                   : std::log1p(std::exp(margin));
    return soft + 0.5 * ridge * x.squaredNorm();
  };
  p.grad = [ridge, d](const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
    const double b = xi[d];
    const double margin = b * xi.head(d).dot(x);
    const double sigma = 1.0 / (1.0 + std::exp(margin));  // sigmoid(-margin)
    return Eigen::VectorXd(-b * sigma * xi.head(d) + ridge * x);
  };
  return p;
}

void decode_bilinear_sample(const Eigen::VectorXd& xi, int dx, int dy,
                            Eigen::MatrixXd& a_out, Eigen::VectorXd& b_out) {
  if (xi.size() != dx * dy + dy) {
    throw std::invalid_argument("bilinear sample: wrong encoded size");
  }
  a_out.resize(dy, dx);
  for (int r = 0; r < dy; ++r)
    for (int c = 0; c < dx; ++c) a_out(r, c) = xi[r * dx + c];
  b_out = xi.segment(dx * dy, dy);
}

namespace {

Eigen::VectorXd encode_bilinear_sample(const Eigen::MatrixXd& a,
                                       const Eigen::VectorXd& b) {
  const int dy = static_cast<int>(a.rows());
  const int dx = static_cast<int>(a.cols());
  Eigen::VectorXd xi(dx * dy + dy);
  for (int r = 0; r < dy; ++r)
    for (int c = 0; c < dx; ++c) xi[r * dx + c] = a(r, c);
  xi.segment(dx * dy, dy) = b;
  return xi;
}

}  // namespace

MinimaxProblem make_bilinear_saddle_problem(
    const std::vector<Eigen::MatrixXd>& a_stack,
    const std::vector<Eigen::VectorXd>& b_stack, double mu_x, double mu_y,
    BallDomain domain_x, BallDomain domain_y) {
  if (a_stack.empty() || a_stack.size() != b_stack.size()) {
    throw std::invalid_argument("bilinear problem: empty or mismatched stacks");
  }
  if (mu_x < 0 || mu_y < 0) {
    throw std::invalid_argument("bilinear problem: moduli must be >= 0");
  }
  const int dy = static_cast<int>(a_stack.front().rows());
  const int dx = static_cast<int>(a_stack.front().cols());
  if (domain_x.dimension() != dx || domain_y.dimension() != dy) {
    throw std::invalid_argument("bilinear problem: domain dimension mismatch");
  }
  const double rx = domain_x.radius + domain_x.center.norm();
  const double ry = domain_y.radius + domain_y.center.norm();

  Eigen::MatrixXd data(dx * dy + dy, static_cast<int>(a_stack.size()));
  double lipschitz = 0;
  double smooth = std::max(mu_x, mu_y);
  for (std::size_t i = 0; i < a_stack.size(); ++i) {
    const Eigen::MatrixXd& a = a_stack[i];
    const Eigen::VectorXd& b = b_stack[i];
    if (a.rows() != dy || a.cols() != dx || b.size() != dy) {
      throw std::invalid_argument("bilinear problem: shape mismatch in stack");
    }
    data.col(static_cast<int>(i)) = encode_bilinear_sample(a, b);
    const double a_norm = a.jacobiSvd().singularValues()[0];
    const double gx = mu_x * rx + a_norm * ry;
    const double gy = a_norm * rx + b.norm() + mu_y * ry;
    lipschitz = std::max(lipschitz, std::hypot(gx, gy));
    // Spectral norm of the symmetric per-sample Hessian
    // [[mu_x I, A^T], [A, -mu_y I]].
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dx + dy, dx + dy);
    hess.topLeftCorner(dx, dx) = mu_x * Eigen::MatrixXd::Identity(dx, dx);
    hess.bottomRightCorner(dy, dy) = -mu_y * Eigen::MatrixXd::Identity(dy, dy);
    hess.topRightCorner(dx, dy) = a.transpose();
    hess.bottomLeftCorner(dy, dx) = a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    smooth = std::max({smooth, std::abs(eig.eigenvalues().minCoeff()),
                       std::abs(eig.eigenvalues().maxCoeff())});
  }

  MinimaxProblem p;
  p.samples = SampleSet(std::move(data));
  p.domain_x = std::move(domain_x);
  p.domain_y = std::move(domain_y);
  p.constants = {lipschitz, smooth, mu_x, mu_y};
  p.family = MinimaxFamily::kBilinearQuadratic;
  using AMap = Eigen::Map<
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  p.value = [mu_x, mu_y, dx, dy](const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& xi) {
    AMap a(xi.data(), dy, dx);
    auto b = xi.segment(dx * dy, dy);
    return 0.5 * mu_x * x.squaredNorm() + y.dot(a * x - b) -
           0.5 * mu_y * y.squaredNorm();
  };
  p.grad_x = [mu_x, dx, dy](const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& xi) {
    AMap a(xi.data(), dy, dx);
    return Eigen::VectorXd(mu_x * x + a.transpose() * y);
  };
  p.grad_y = [mu_y, dx, dy](const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& xi) {
    AMap a(xi.data(), dy, dx);
    return Eigen::VectorXd(a * x - xi.segment(dx * dy, dy) - mu_y * y);
  };
  return p;
}

void bilinear_means(const MinimaxProblem& problem, Eigen::MatrixXd& a_mean,
                    Eigen::VectorXd& b_mean) {
  if (problem.family != MinimaxFamily::kBilinearQuadratic) {
    throw NotSupportedError("bilinear_means: not a bilinear problem");
  }
  decode_bilinear_sample(problem.samples.mean(), problem.dx(), problem.dy(),
                         a_mean, b_mean);
}

std::vector<int> partition_sizes(int n, int k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("partition: K must satisfy 1 <= K <= n");
  }
  const int base = n / k;
  std::vector<int> sizes(k, base);
  sizes.back() += n - base * k;
  return sizes;
}

std::vector<SampleSet> partition_disjoint(const SampleSet& samples, int k) {
  const std::vector<int> sizes = partition_sizes(samples.size(), k);
  std::vector<SampleSet> blocks;
  blocks.reserve(k);
  int start = 0;
  for (int size : sizes) {
    blocks.emplace_back(Eigen::MatrixXd(samples.columns().middleCols(start, size)));
    start += size;
  }
  return blocks;
}

double empirical_value(const MinProblem& problem, const Eigen::VectorXd& x) {
  double total = 0;
  for (int i = 0; i < problem.n(); ++i) total += problem.loss(x, problem.samples.sample(i));
  return total / problem.n();
}

Eigen::VectorXd empirical_grad(const MinProblem& problem,
                               const Eigen::VectorXd& x) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < problem.n(); ++i) total += problem.grad(x, problem.samples.sample(i));
  return total / problem.n();
}

double empirical_value(const MinimaxProblem& problem, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y) {
  double total = 0;
  for (int i = 0; i < problem.n(); ++i)
    total += problem.value(x, y, problem.samples.sample(i));
  return total / problem.n();
}

Eigen::VectorXd empirical_grad_x(const MinimaxProblem& problem,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < problem.n(); ++i)
    total += problem.grad_x(x, y, problem.samples.sample(i));
  return total / problem.n();
}

Eigen::VectorXd empirical_grad_y(const MinimaxProblem& problem,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(y.size());
  for (int i = 0; i < problem.n(); ++i)
    total += problem.grad_y(x, y, problem.samples.sample(i));
  return total / problem.n();
}

}  // namespace dpopt
