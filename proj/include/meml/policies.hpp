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

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "meml/environments.hpp"
#include "meml/rls.hpp"

namespace meml {

// Per-round and cumulative pseudo-regret of one run.
struct RegretTrace {
  std::vector<double> instant;
  std::vector<double> cumulative;

  void push(double regret) {
    instant.push_back(regret);
    cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + regret);
  }
  double final_regret() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

// Constants of the bandit problem shared by every policy in a scenario.
struct BanditParams {
  int horizon = 70;                // T
  double lambda = 1.0;
  double delta = 0.1;
  double noise_R = 0.1;
  double action_norm_bound = 1.0;  // L
  double param_bound = 1.0;        // S

  ConfidenceParams confidence(int dim) const {
    return {dim, lambda, action_norm_bound, noise_R, delta};
  }
};

struct BiasSet {
  enum class Source { kLabeledTraining, kOracleMeans, kPooledAverage };

  std::vector<Vector> biases;
  std::vector<int> counts;
  Source source = Source::kLabeledTraining;

  int size() const { return static_cast<int>(biases.size()); }

  // Folds one more task estimate into environment `env`'s running mean.
  void absorb(int env, const Vector& estimate);
};

const char* to_string(BiasSet::Source source);

struct MemlConfig {
  BanditParams bandit;
  int exploration_rounds = 5;  // T0
  BiasOracleConfig bias_oracle;
  bool update_bias_after_task = false;

  // Throws ConfigError unless 0 <= T0 < T.
  void validate() const;
};

// The dataset Z_i of one task plus what the learner derived from it.
struct TaskRunRecord {
  std::vector<Vector> actions;
  std::vector<double> rewards;
  std::optional<int> chosen_environment;
  Vector final_unbiased_estimate;
  // Smallest eigenvalue of the final Gram matrix (without lambda I).
  double final_gram_min_eigenvalue = 0.0;
  // Estimate from the round-robin prefix, filled for training tasks only.
  std::optional<Vector> round_robin_estimate;
};

struct TaskRun {
  TaskRunRecord record;
  RegretTrace trace;
};

struct ActionChoice {
  int index = 0;
  Vector action;
};

// Optimistic choice over the ellipsoid centered at the biased estimate with
// the biased radius at round t. bias = 0 with bias_distance = S is plain
// OFUL. Ties go to the lowest index. Throws ConfigError on an empty set.
ActionChoice oful_select_action(const OnlineRls& state, const Vector& bias,
                                double bias_distance, const ActionSet& actions,
                                std::int64_t t, const ConfidenceParams& params);

// Averages the final unbiased estimates of each environment's records.
// Throws InsufficientTrainingTasks when an environment has no records.
BiasSet build_bias_set(const std::vector<std::vector<TaskRunRecord>>& training);

// One bias: the mean final estimate over every training record.
BiasSet pooled_bias(const std::vector<std::vector<TaskRunRecord>>& training);

// One bias: the mean round-robin prefix estimate over every training record.
BiasSet round_robin_bias(const std::vector<std::vector<TaskRunRecord>>& training);

BiasSet oracle_bias_set(const MixtureSpec& mixture);

// Index of the nearest bias in squared Euclidean distance; lowest index on ties.
int classify_environment(const Vector& estimate, const BiasSet& bias_set);

// Plays biased OFUL on the whole task with a fixed bias. Exposed for the
// baselines and the training phase.
TaskRun run_biased_oful(const TaskInstance& instance, const Vector& bias,
                        double bias_distance, const BanditParams& params);

// Uniform random play for `rounds` rounds on a fresh unbiased state, then
// nearest-bias classification of the resulting estimate.
int explore_and_classify(const TaskInstance& instance, const BiasSet& bias_set,
                         int rounds, const BanditParams& params, Engine& exploration);

// MEML-OFUL on one task: T0 uniform exploration rounds, environment
// classification, then biased OFUL with the selected bias. The trace charges
// every round, exploration included.
TaskRun meml_run_task(const MemlConfig& config, const BiasSet& bias_set,
                      const TaskInstance& instance, Engine& exploration);

// Estimate after d round-robin rounds, each playing the arm most aligned with
// the next standard basis vector.
Vector round_robin_prefix_estimate(const TaskInstance& instance, const BanditParams& params);

enum class Policy { kMemlOful, kItl, kOracle, kAvgOful, kRrOful };

// Config/CLI spelling ("meml-oful", "itl", ...).
std::string policy_key(Policy policy);
// Display name used in CSV and charts ("MEML-OFUL", "ITL", ...).
std::string policy_label(Policy policy);
std::optional<Policy> parse_policy(const std::string& key);

struct BaselineInputs {
  std::optional<std::vector<Vector>> true_means;  // Oracle
  std::optional<Vector> pooled_bias;              // AVG-OFUL
  std::optional<Vector> round_robin_bias;         // RR-OFUL
  BiasOracleConfig bias_oracle;
};

// ITL, Oracle, AVG-OFUL or RR-OFUL on one task (no exploration phase).
// Throws ConfigError when the policy's inputs are missing.
TaskRun run_baseline_task(Policy policy, const BaselineInputs& inputs,
                          const TaskInstance& instance, const BanditParams& params);

}  // namespace meml
