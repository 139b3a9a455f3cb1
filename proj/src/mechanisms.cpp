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

#include "dpopt/mechanisms.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace dpopt {

PrivacyBudget::PrivacyBudget(double eps, double del) : epsilon(eps), delta(del) {
  if (!(epsilon > 0) || !(epsilon < 1)) {
    throw std::invalid_argument("PrivacyBudget: epsilon must lie in (0, 1)");
  }
  if (!(delta > 0) || !(delta < 1)) {
    throw std::invalid_argument("PrivacyBudget: delta must lie in (0, 1)");
  }
}

double gaussian_sigma(double sensitivity, double epsilon, double delta) {
  if (sensitivity < 0) {
    throw std::invalid_argument("gaussian_sigma: sensitivity must be >= 0");
  }
  if (!(epsilon > 0) || !(delta > 0) || !(delta < 1)) {
    throw std::invalid_argument("gaussian_sigma: invalid privacy parameters");
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

double gaussian_sigma(double sensitivity, const PrivacyBudget& budget) {
  return gaussian_sigma(sensitivity, budget.epsilon, budget.delta);
}

Eigen::VectorXd add_gaussian_noise(const Eigen::VectorXd& point, double sigma,
                                   RngStream& stream) {
  if (sigma < 0) throw std::invalid_argument("add_gaussian_noise: sigma < 0");
  if (sigma == 0) return point;
  return point + sigma * stream.normal_vector(static_cast<int>(point.size()));
}

void PrivacyLedger::append(LedgerEntry entry) {
  if (entry.kind == CompositionKind::kParallel && entry.group_key.empty()) {
    throw LedgerViolation("parallel ledger entry requires a group key");
  }
  entries_.push_back(std::move(entry));
}

void PrivacyLedger::extend(const PrivacyLedger& other) {
  for (const LedgerEntry& e : other.entries()) entries_.push_back(e);
}

PrivacyTotal PrivacyLedger::total() const {
  PrivacyTotal out;
  struct Group {
    double eps = 0;
    double delta = 0;
    std::set<std::string> partitions;
  };
  std::map<std::string, Group> groups;
  for (const LedgerEntry& e : entries_) {
    if (e.non_private) out.non_private = true;
    if (e.kind == CompositionKind::kSequential) {
      out.epsilon += e.budget.epsilon;
      out.delta += e.budget.delta;
      continue;
    }
    Group& g = groups[e.group_key];
    if (!g.partitions.insert(e.partition_id).second) {
      throw LedgerViolation("overlapping partition '" + e.partition_id +
                            "' declared parallel in group '" + e.group_key + "'");
    }
    g.eps = std::max(g.eps, e.budget.epsilon);
    g.delta = std::max(g.delta, e.budget.delta);
  }
  for (const auto& [key, g] : groups) {
    out.epsilon += g.eps;
    out.delta += g.delta;
  }
  return out;
}

void PrivacyLedger::serialize(std::ostream& out) const {
  char buf[64];
  for (const LedgerEntry& e : entries_) {
    out << e.mechanism_id << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", e.budget.epsilon);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", e.budget.delta);
    out << buf << ",";
    if (e.kind == CompositionKind::kSequential) {
      out << "sequential";
    } else {
      out << "parallel:" << e.group_key;
    }
    out << "," << e.partition_id;
    if (e.non_private) out << ",NON-PRIVATE";
    out << "\n";
  }
}

std::string PrivacyLedger::serialize() const {
  std::ostringstream os;
  serialize(os);
  return os.str();
}

PrivacyTotal ledger_total(const PrivacyLedger& ledger) { return ledger.total(); }

}  // namespace dpopt
