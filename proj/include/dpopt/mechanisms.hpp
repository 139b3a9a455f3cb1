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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dpopt/rng.hpp"

namespace dpopt {

// (epsilon, delta) privacy parameters; epsilon in (0, 1), delta in (0, 1).
// The delta < 1/n cap is enforced at experiment configuration.
struct PrivacyBudget {
  double epsilon = 0;
  double delta = 0;

  PrivacyBudget() = default;
  PrivacyBudget(double eps, double del);

  PrivacyBudget half() const { return PrivacyBudget(epsilon / 2, delta / 2); }
};

// Gaussian-mechanism noise scale for an L2 sensitivity:
// sigma = sensitivity * sqrt(2 log(1.25/delta)) / epsilon.
// Callers pass the delta argument their algorithm's formula dictates.
double gaussian_sigma(double sensitivity, double epsilon, double delta);
double gaussian_sigma(double sensitivity, const PrivacyBudget& budget);

// point + N(0, sigma^2 I); sigma = 0 returns the point unchanged.
Eigen::VectorXd add_gaussian_noise(const Eigen::VectorXd& point, double sigma,
                                   RngStream& stream);

// Declared parallel partitions overlap, or entries are inconsistent.
class LedgerViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CompositionKind { kSequential, kParallel };

struct LedgerEntry {
  std::string mechanism_id;
  PrivacyBudget budget;
  std::string partition_id;
  CompositionKind kind = CompositionKind::kSequential;
  std::string group_key;       // parallel entries with equal keys share a group
  bool non_private = false;    // testing-only no-noise runs, loudly labeled
};

struct PrivacyTotal {
  double epsilon = 0;
  double delta = 0;
  bool non_private = false;
};

// Append-only record of mechanism invocations. Sequential entries add;
// parallel entries within one group (disjoint partitions) contribute the
// group maximum.
class PrivacyLedger {
 public:
  void append(LedgerEntry entry);
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // Appends every entry of `other` after this ledger's entries.
  void extend(const PrivacyLedger& other);

  PrivacyTotal total() const;

  // One entry per line: id, epsilon, delta, group, partition.
  void serialize(std::ostream& out) const;
  std::string serialize() const;

 private:
  std::vector<LedgerEntry> entries_;
};

PrivacyTotal ledger_total(const PrivacyLedger& ledger);

}  // namespace dpopt
