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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpopt/runner.hpp"
#include "dpopt/solvers_min.hpp"
#include "dpopt/verify.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 solver/run failure,
// 4 acceptance-check failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct CommonFlags {
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  bool no_noise = false;
  int jobs = 1;
};

dpopt::RunConfig load_config(const std::string& path, const CommonFlags& flags) {
  dpopt::RunConfig config = dpopt::load_run_config(path);
  if (!flags.out_override.empty()) config.out_dir = flags.out_override;
  if (flags.has_seed) config.seed = flags.seed_override;
  if (flags.no_noise) config.no_noise = true;
  return config;
}

int execute(const std::string& path, const CommonFlags& flags,
            dpopt::ExperimentKind expected_group) {
  dpopt::RunConfig config;
  try {
    config = load_config(path, flags);
    const bool is_probe = config.kind == dpopt::ExperimentKind::kStabilityProbe;
    const bool is_sweep = config.kind == dpopt::ExperimentKind::kUtilitySweep;
    if (expected_group == dpopt::ExperimentKind::kStabilityProbe && !is_probe) {
      throw dpopt::ConfigError("probe subcommand needs experiment.kind = stability_probe",
                               "experiment.kind");
    }
    if (expected_group == dpopt::ExperimentKind::kUtilitySweep && !is_sweep) {
      throw dpopt::ConfigError("sweep subcommand needs experiment.kind = utility_sweep",
                               "experiment.kind");
    }
    if (expected_group == dpopt::ExperimentKind::kScMin && (is_probe || is_sweep)) {
      throw dpopt::ConfigError(
          "run subcommand handles single experiments; use probe/sweep",
          "experiment.kind");
    }
  } catch (const dpopt::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  if (config.no_noise) {
    std::cerr << "WARNING: --no-noise set; outputs are NOT differentially "
                 "private (testing only)\n";
  }

  try {
    const dpopt::RunnerResult result = dpopt::run_experiment(config, flags.jobs);
    const auto written = dpopt::write_artifacts(result, config, config.out_dir);
    for (const auto& p : written) std::cout << "wrote " << p << "\n";
    if (!result.probe_text.empty()) std::cout << result.probe_text;
    if (result.probe_violations > 0) return kExitCheck;
    for (const auto& r : result.records) {
      if (r.status.rfind("ok", 0) != 0) {
        std::cerr << "run failure: " << r.status << "\n";
        return kExitSolver;
      }
    }
    return kExitOk;
  } catch (const dpopt::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const dpopt::BudgetExceeded& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "run failure: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private stochastic optimization experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  app.add_option("--out", flags.out_override, "Override the output directory");
  auto* seed_opt =
      app.add_option("--seed", flags.seed_override, "Override the root seed");
  app.add_flag("--no-noise", flags.no_noise,
               "Disable noise; outputs are NOT private (testing only)");
  app.add_option("--jobs", flags.jobs, "Sweep worker pool size")
      ->check(CLI::PositiveNumber);

  std::string run_config, sweep_config, probe_config;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment config");
  run_cmd->fallthrough();
  run_cmd->add_option("config", run_config, "Config file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a utility sweep config");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("config", sweep_config, "Config file")->required();
  auto* probe_cmd = app.add_subcommand("probe", "Run a stability probe config");
  probe_cmd->fallthrough();
  probe_cmd->add_option("config", probe_config, "Config file")->required();

  auto* verify_cmd =
      app.add_subcommand("verify", "Run the built-in acceptance checks");
  bool quick = false;
  double mutate_sigma = 1.0;
  verify_cmd->add_flag("--quick", quick, "Halve trial counts");
  verify_cmd
      ->add_option("--mutate-sigma", mutate_sigma,
                   "Test hook: corrupt the noise scale by this factor")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  flags.has_seed = seed_opt->count() > 0;

  if (verify_cmd->parsed()) {
    dpopt::VerifyOptions options;
    options.quick = quick;
    options.sigma_mutation = mutate_sigma;
    return dpopt::run_verify(std::cout, options) == 0 ? kExitOk : kExitCheck;
  }
  if (run_cmd->parsed()) {
    return execute(run_config, flags, dpopt::ExperimentKind::kScMin);
  }
  if (sweep_cmd->parsed()) {
    return execute(sweep_config, flags, dpopt::ExperimentKind::kUtilitySweep);
  }
  return execute(probe_config, flags, dpopt::ExperimentKind::kStabilityProbe);
}
