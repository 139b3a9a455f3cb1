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

#include <string>
#include <vector>

#include "dpopt/config.hpp"
#include "dpopt/evaluation.hpp"
#include "dpopt/framework.hpp"

namespace dpopt {

// Structured text record of one private run: id, config echo, ledger,
// per-phase trace and output vectors. Wall time is intentionally absent;
// the record is a pure function of (config, seed).
std::string serialize_run_record(const DpRunOutput& output,
                                 const RunConfig& config, int repetition);

struct RunnerResult {
  std::vector<UtilityRecord> records;
  std::vector<UtilityAggregate> aggregates;  // sweeps only
  std::vector<std::string> run_records;      // one per completed run
  std::string probe_text;                    // probes only
  int probe_violations = 0;
  std::string records_csv() const;
  std::string records_jsonl() const;
  std::string aggregate_csv() const;
};

// Executes one experiment configuration end to end. `jobs` bounds the sweep
// worker pool; single runs are sequential. Solver failures inside sweeps
// are recorded per-record; for single runs they propagate.
RunnerResult run_experiment(const RunConfig& config, int jobs = 1);

// Writes records.csv / records.jsonl, run_<rep>.txt, aggregate.csv and
// probe.txt (as applicable) into `out_dir`; returns the written paths.
std::vector<std::string> write_artifacts(const RunnerResult& result,
                                         const RunConfig& config,
                                         const std::string& out_dir);

}  // namespace dpopt
