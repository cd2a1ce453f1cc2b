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

#include <cstdint>
#include <optional>
#include <vector>

#include "meml/environments.hpp"
#include "meml/policies.hpp"
#include "meml/rng.hpp"

namespace meml {

// Position of one experiment inside the seed hierarchy.
struct SimContext {
  std::uint64_t root_seed = 0;
  std::uint64_t scenario = 0;
  std::uint64_t replication = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

using TrainingRecords = std::vector<std::vector<TaskRunRecord>>;

// Samples counts[nu] labeled tasks from each environment and runs plain OFUL
// on each for the full horizon. Every record also carries the round-robin
// prefix estimate used by RR-OFUL.
TrainingRecords run_training_phase(const MixtureSpec& mixture, const ActionSetSpec& action_spec,
                                   const std::vector<int>& counts, const BanditParams& params,
                                   const SimContext& ctx);

// Test task `task_index`: identical for every policy under the same context.
TaskInstance make_test_instance(const MixtureSpec& mixture, const ActionSetSpec& action_spec,
                                const BanditParams& params, const SimContext& ctx,
                                int task_index);

Engine exploration_engine(const SimContext& ctx, int task_index, Policy policy);

struct TransferSetup {
  std::vector<Policy> policies;
  MemlConfig meml;
  BiasSet bias_set;          // MEML-OFUL's per-environment biases
  BaselineInputs baselines;  // Oracle / AVG-OFUL / RR-OFUL inputs
  int n_test_tasks = 10;
};

struct PolicyTaskRun {
  int task_index = 0;
  int true_environment = 0;
  std::optional<int> chosen_environment;
  RegretTrace trace;
};

struct TransferRun {
  std::vector<Policy> policies;
  std::vector<std::vector<PolicyTaskRun>> runs;  // [policy][task]
  BiasSet final_bias_set;
};

// Runs every policy on the same n_test_tasks task instances. When
// meml.update_bias_after_task is set, tasks run sequentially and MEML-OFUL's
// bias set absorbs each completed task's unbiased estimate.
TransferRun run_transfer_tasks(const MixtureSpec& mixture, const ActionSetSpec& action_spec,
                               const TransferSetup& setup, const SimContext& ctx);

struct PolicyCurve {
  Policy policy = Policy::kItl;
  std::vector<double> mean;
  std::vector<double> stddev;
  int n = 0;
};

struct TransferRegretEstimate {
  std::vector<PolicyCurve> curves;

  // Throws std::out_of_range if the policy was not evaluated.
  const PolicyCurve& at(Policy policy) const;
};

// Mean and sample standard deviation of cumulative regret per round, pooled
// over every (replication, task) pair in task-index order.
TransferRegretEstimate aggregate_transfer(const std::vector<TransferRun>& runs);

TransferRegretEstimate evaluate_transfer(const MixtureSpec& mixture,
                                         const ActionSetSpec& action_spec,
                                         const TransferSetup& setup, const SimContext& ctx);

struct MisclassificationRow {
  int exploration_rounds = 0;
  int n_tasks = 0;
  int errors = 0;
  double rate = 0.0;
  double standard_error = 0.0;
};

// Exploration plus classification only, on the same n_tasks instances for
// every T0 in the grid.
std::vector<MisclassificationRow> misclassification_study(
    const MixtureSpec& mixture, const BiasSet& bias_set, const std::vector<int>& t0_grid,
    int n_tasks, const ActionSetSpec& action_spec, const BanditParams& params,
    const SimContext& ctx);

}  // namespace meml
