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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpopt {

// Config problem: carries the offending line/field for diagnostics.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, const std::string& field = "",
              int line = 0)
      : std::runtime_error(format(message, field, line)),
        field_(field),
        line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& field,
                            int line);
  std::string field_;
  int line_;
};

enum class ExperimentKind {
  kScMin,
  kConvexMinPhased,
  kScScSaddle,
  kCcSaddle,
  kCscSaddle,
  kStabilityProbe,
  kUtilitySweep,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

// Flat line-oriented `key = value` text with dotted section keys;
// '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct RunConfig {
  ExperimentKind kind = ExperimentKind::kScMin;

  // Problem family.
  std::string family = "quadratic";  // quadratic | logistic | bilinear
  int n = 100;
  int dim = 2;       // d (min) or d_x
  int dim_y = 0;     // 0 -> dim
  double mu = 1.0;   // quadratic strength / logistic ridge
  double mu_x = 1.0;
  double mu_y = 1.0;
  double sample_radius = 1.0;   // quadratic sample spread / bilinear noise
  double mean_shift = 0.5;      // population mean magnitude
  double domain_radius = 5.0;

  // Privacy.
  double epsilon = 0.5;
  double delta = 0;        // resolved value; 0 in a file means "auto"
  bool delta_auto = true;  // delta was resolved to 1/(2n)

  // Base solver.
  std::string solver;  // empty -> per-kind default
  long solver_max_evals = 0;     // 0 -> default budget
  double budget_constant = 3.0;

  // Run control.
  std::uint64_t seed = 1;
  int repetitions = 1;
  std::string out_dir = "out";
  bool no_noise = false;
  double mu_override = 0;  // 0 -> default_mu

  // Stability probes.
  int probe_trials = 200;
  double probe_reg_mu = 0;  // 0 -> unregularized
  std::vector<int> probe_ns;  // empty -> {n}

  // Sweeps.
  std::vector<int> sweep_n;
  std::vector<double> sweep_epsilon;
  int sweep_seeds = 30;
  std::string sweep_kind;  // empty -> per-family default
  int holdout_factor = 10;

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates; validation failures cite the field.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Re-emittable echo; parse_run_config(config_echo(c)) reproduces c.
std::string config_echo(const RunConfig& config);

}  // namespace dpopt
