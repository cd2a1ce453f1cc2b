// Copyright 2026 The MEML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "meml/bounds.hpp"
#include "meml/io/config.hpp"
#include "meml/meta_sim.hpp"

namespace meml::io {

inline constexpr const char* kSoftwareVersion = "0.1.0";

struct ScenarioResult {
  ResolvedScenario resolved;
  std::vector<TransferRun> replications;
  std::vector<BiasSet> bias_sets;  // MEML-OFUL bias set of each replication
  std::vector<BaselineInputs> baselines;
  TransferRegretEstimate estimate;
  AssumptionReport diagnostics;
  BoundReport bounds;
};

// Training, test evaluation and bound evaluation for every replication. No
// file output. Throws ConfigError for invalid scenarios.
ScenarioResult simulate_scenario(const ScenarioConfig& config);

// Final-round cumulative regret of `policy`, averaged over the test tasks of
// each replication (one value per replication).
std::vector<double> replication_final_regret(const ScenarioResult& result, Policy policy);

// RunMetadata as pretty-printed JSON.
std::string metadata_json(const ScenarioConfig& config, const ScenarioResult& result,
                          double elapsed_seconds);

// Writes regret.csv, transfer_regret.csv, bounds.csv, metadata.json and
// regret_curves.svg into out_dir (created if needed). Throws RuntimeError
// when the directory is not writable.
void write_artifacts(const ScenarioConfig& config, const ScenarioResult& result,
                     const std::string& out_dir, double elapsed_seconds);

// simulate_scenario + write_artifacts into config.output_dir. Warnings go to `log`.
ScenarioResult run_scenario(const ScenarioConfig& config, std::ostream& log);

// Assumption diagnostics, T0 rule result and delta admissibility.
void diagnose(const ScenarioConfig& config, std::ostream& out);

// Misclassification rate over a T0 grid using replication 0's training biases.
std::vector<MisclassificationRow> t0_study(const ScenarioConfig& config,
                                           const std::vector<int>& grid, int n_tasks);

}  // namespace meml::io
