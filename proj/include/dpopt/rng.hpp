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

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace dpopt {

// Seeded random stream. Every consumer owns its stream, so adding draws in
// one component never shifts the values seen by another.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }

  double normal() { return normal_(engine_); }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z[i] = normal_(engine_);
    return z;
  }

  // Uniform over the closed Euclidean ball of the given radius.
  Eigen::VectorXd uniform_ball(int dim, double radius);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Derives named child seeds from one root seed. A (label, index) pair maps
// to a fixed seed regardless of how many other streams were derived.
class SeedSplitter {
 public:
  explicit SeedSplitter(std::uint64_t root) : root_(root) {}

  std::uint64_t root() const { return root_; }
  std::uint64_t derive(std::string_view label, std::uint64_t index = 0) const;
  RngStream stream(std::string_view label, std::uint64_t index = 0) const {
    return RngStream(derive(label, index));
  }

 private:
  std::uint64_t root_;
};

}  // namespace dpopt
