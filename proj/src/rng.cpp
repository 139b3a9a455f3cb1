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

#include "dpopt/rng.hpp"

#include <cmath>

namespace dpopt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Eigen::VectorXd RngStream::uniform_ball(int dim, double radius) {
  // Gaussian direction + radial cdf inversion.
  Eigen::VectorXd z = normal_vector(dim);
  double norm = z.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(dim);
  double r = radius * std::pow(uniform(), 1.0 / dim);
  return z * (r / norm);
}

std::uint64_t SeedSplitter::derive(std::string_view label,
                                   std::uint64_t index) const {
  std::uint64_t h = splitmix64(root_ ^ fnv1a(label));
  return splitmix64(h ^ splitmix64(index + 0x51ed270b1a2f9d3bULL));
}

}  // namespace dpopt
