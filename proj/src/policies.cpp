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

#include "meml/policies.hpp"

#include <limits>
#include <sstream>

#include "meml/errors.hpp"

namespace meml {

namespace {

// Plays one round: observe the reward, update the state, log regret.
void play(const TaskInstance& instance, int round, const Vector& action,
          OnlineRls& state, TaskRun& run) {
  const double reward = instance.expected_reward(action) + instance.noise.at(round);
  state.update(action, reward);
  run.record.actions.push_back(action);
  run.record.rewards.push_back(reward);
  // Clamp float noise of ~1e-16 on optimal picks so regret stays nonnegative.
  run.trace.push(std::max(0.0, instance.best_reward(round) - instance.expected_reward(action)));
}

void finish(const OnlineRls& state, TaskRun& run) {
  run.record.final_unbiased_estimate = state.estimate();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.gram(), Eigen::EigenvaluesOnly);
  run.record.final_gram_min_eigenvalue = eig.eigenvalues().minCoeff();
}

// Biased OFUL from `first_round` to the end of the task on an existing state.
void continue_biased_oful(const TaskInstance& instance, const Vector& bias,
                          double bias_distance, const BanditParams& params,
                          int first_round, OnlineRls& state, TaskRun& run) {
  const ConfidenceParams confidence = params.confidence(instance.dim());
  for (int t = first_round; t < instance.horizon(); ++t) {
    const ActionChoice choice = oful_select_action(state, bias, bias_distance,
                                                   instance.action_sets[t],
                                                   state.round_count(), confidence);
    play(instance, t, choice.action, state, run);
  }
}

}  // namespace

void BiasSet::absorb(int env, const Vector& estimate) {
  Vector& mean = biases.at(env);
  int& n = counts.at(env);
  ++n;
  mean += (estimate - mean) / static_cast<double>(n);
}

const char* to_string(BiasSet::Source source) {
  switch (source) {
    case BiasSet::Source::kLabeledTraining:
      return "labeled-training";
    case BiasSet::Source::kOracleMeans:
      return "oracle-means";
    case BiasSet::Source::kPooledAverage:
      return "pooled-average";
  }
  return "unknown";
}

void MemlConfig::validate() const {
  if (bandit.horizon <= 0) throw ConfigError("horizon must be positive");
  if (exploration_rounds < 0 || exploration_rounds >= bandit.horizon) {
    std::ostringstream msg;
    msg << "exploration rounds T0 = " << exploration_rounds
        << " must satisfy 0 <= T0 < T = " << bandit.horizon;
    throw ConfigError(msg.str());
  }
}

ActionChoice oful_select_action(const OnlineRls& state, const Vector& bias,
                                double bias_distance, const ActionSet& actions,
                                std::int64_t t, const ConfidenceParams& params) {
  if (actions.empty()) throw ConfigError("empty action set");
  const ConfidenceEllipsoid ellipsoid{state.biased_estimate(bias), state.regularized_gram(),
                                      biased_radius(t, params, bias_distance)};
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].norm() > params.action_norm_bound * (1.0 + 1e-9)) {
      throw ConfigError("action exceeds the configured norm bound L");
    }
    const double score = ellipsoid_ucb(actions[i], ellipsoid, state.gram_reg_inverse());
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return {best, actions[best]};
}

BiasSet build_bias_set(const std::vector<std::vector<TaskRunRecord>>& training) {
  BiasSet set;
  set.source = BiasSet::Source::kLabeledTraining;
  for (std::size_t env = 0; env < training.size(); ++env) {
    const auto& records = training[env];
    if (records.empty()) throw InsufficientTrainingTasks(static_cast<int>(env));
    Vector sum = Vector::Zero(records.front().final_unbiased_estimate.size());
    for (const auto& r : records) sum += r.final_unbiased_estimate;
    set.biases.push_back(sum / static_cast<double>(records.size()));
    set.counts.push_back(static_cast<int>(records.size()));
  }
  if (set.biases.empty()) throw InsufficientTrainingTasks(0);
  return set;
}

namespace {

template <typename Extract>
BiasSet pool(const std::vector<std::vector<TaskRunRecord>>& training, Extract extract) {
  Vector sum;
  int n = 0;
  for (std::size_t env = 0; env < training.size(); ++env) {
    if (training[env].empty()) throw InsufficientTrainingTasks(static_cast<int>(env));
    for (const auto& r : training[env]) {
      const Vector& v = extract(r);
      if (n == 0) sum = Vector::Zero(v.size());
      sum += v;
      ++n;
    }
  }
  if (n == 0) throw InsufficientTrainingTasks(0);
  BiasSet set;
  set.source = BiasSet::Source::kPooledAverage;
  set.biases.push_back(sum / static_cast<double>(n));
  set.counts.push_back(n);
  return set;
}

}  // namespace

BiasSet pooled_bias(const std::vector<std::vector<TaskRunRecord>>& training) {
  return pool(training, [](const TaskRunRecord& r) -> const Vector& {
    return r.final_unbiased_estimate;
  });
}

BiasSet round_robin_bias(const std::vector<std::vector<TaskRunRecord>>& training) {
  return pool(training, [](const TaskRunRecord& r) -> const Vector& {
    if (!r.round_robin_estimate) {
      throw ConfigError("training record has no round-robin prefix estimate");
    }
    return *r.round_robin_estimate;
  });
}

BiasSet oracle_bias_set(const MixtureSpec& mixture) {
  BiasSet set;
  set.source = BiasSet::Source::kOracleMeans;
  for (const auto& env : mixture.environments) {
    set.biases.push_back(env.mean);
    set.counts.push_back(0);
  }
  return set;
}

int classify_environment(const Vector& estimate, const BiasSet& bias_set) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < bias_set.size(); ++i) {
    const double dist = (estimate - bias_set.biases[i]).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

TaskRun run_biased_oful(const TaskInstance& instance, const Vector& bias,
                        double bias_distance, const BanditParams& params) {
  TaskRun run;
  OnlineRls state(instance.dim(), params.lambda, params.action_norm_bound);
  continue_biased_oful(instance, bias, bias_distance, params, 0, state, run);
  finish(state, run);
  return run;
}

namespace {

void explore(const TaskInstance& instance, int rounds, Engine& exploration,
             OnlineRls& state, TaskRun& run) {
  for (int t = 0; t < rounds; ++t) {
    const ActionSet& arms = instance.action_sets.at(t);
    std::uniform_int_distribution<std::size_t> pick(0, arms.size() - 1);
    play(instance, t, arms[pick(exploration)], state, run);
  }
}

}  // namespace

int explore_and_classify(const TaskInstance& instance, const BiasSet& bias_set,
                         int rounds, const BanditParams& params, Engine& exploration) {
  TaskRun scratch;
  OnlineRls state(instance.dim(), params.lambda, params.action_norm_bound);
  explore(instance, rounds, exploration, state, scratch);
  return classify_environment(state.estimate(), bias_set);
}

TaskRun meml_run_task(const MemlConfig& config, const BiasSet& bias_set,
                      const TaskInstance& instance, Engine& exploration) {
  config.validate();
  if (bias_set.size() == 0) throw ConfigError("MEML-OFUL needs a nonempty bias set");
  if (instance.horizon() != config.bandit.horizon) {
    throw ConfigError("task instance horizon does not match the configured horizon");
  }

  TaskRun run;
  OnlineRls state(instance.dim(), config.bandit.lambda, config.bandit.action_norm_bound);
  explore(instance, config.exploration_rounds, exploration, state, run);

  const int env = classify_environment(state.estimate(), bias_set);
  run.record.chosen_environment = env;
  const Vector& bias = bias_set.biases[env];
  const double distance = config.bias_oracle.distance(bias, instance.task.theta);

  continue_biased_oful(instance, bias, distance, config.bandit, config.exploration_rounds,
                       state, run);
  finish(state, run);
  return run;
}

Vector round_robin_prefix_estimate(const TaskInstance& instance, const BanditParams& params) {
  const int d = instance.dim();
  OnlineRls state(d, params.lambda, params.action_norm_bound);
  const int rounds = std::min(d, instance.horizon());
  for (int t = 0; t < rounds; ++t) {
    const ActionSet& arms = instance.action_sets[t];
    int best = 0;
    for (std::size_t i = 1; i < arms.size(); ++i) {
      if (arms[i][t] > arms[best][t]) best = static_cast<int>(i);
    }
    const Vector& x = arms[best];
    state.update(x, instance.expected_reward(x) + instance.noise[t]);
  }
  return state.estimate();
}

std::string policy_key(Policy policy) {
  switch (policy) {
    case Policy::kMemlOful:
      return "meml-oful";
    case Policy::kItl:
      return "itl";
    case Policy::kOracle:
      return "oracle";
    case Policy::kAvgOful:
      return "avg-oful";
    case Policy::kRrOful:
      return "rr-oful";
  }
  return "unknown";
}

std::string policy_label(Policy policy) {
  switch (policy) {
    case Policy::kMemlOful:
      return "MEML-OFUL";
    case Policy::kItl:
      return "ITL";
    case Policy::kOracle:
      return "Oracle";
    case Policy::kAvgOful:
      return "AVG-OFUL";
    case Policy::kRrOful:
      return "RR-OFUL";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(const std::string& key) {
  for (Policy p : {Policy::kMemlOful, Policy::kItl, Policy::kOracle, Policy::kAvgOful,
                   Policy::kRrOful}) {
    if (key == policy_key(p) || key == policy_label(p)) return p;
  }
  return std::nullopt;
}

TaskRun run_baseline_task(Policy policy, const BaselineInputs& inputs,
                          const TaskInstance& instance, const BanditParams& params) {
  const Vector& theta = instance.task.theta;
  switch (policy) {
    case Policy::kItl:
      return run_biased_oful(instance, Vector::Zero(instance.dim()), params.param_bound,
                             params);
    case Policy::kOracle: {
      if (!inputs.true_means) throw ConfigError("Oracle policy requires the true means");
      const Vector& bias = inputs.true_means->at(instance.task.environment);
      TaskRun run =
          run_biased_oful(instance, bias, inputs.bias_oracle.distance(bias, theta), params);
      run.record.chosen_environment = instance.task.environment;
      return run;
    }
    case Policy::kAvgOful: {
      if (!inputs.pooled_bias) throw ConfigError("AVG-OFUL requires a pooled bias");
      const Vector& bias = *inputs.pooled_bias;
      return run_biased_oful(instance, bias, inputs.bias_oracle.distance(bias, theta), params);
    }
    case Policy::kRrOful: {
      if (!inputs.round_robin_bias) throw ConfigError("RR-OFUL requires a round-robin bias");
      const Vector& bias = *inputs.round_robin_bias;
      return run_biased_oful(instance, bias, inputs.bias_oracle.distance(bias, theta), params);
    }
    case Policy::kMemlOful:
      break;
  }
  throw ConfigError("MEML-OFUL is not a baseline; use meml_run_task");
}

}  // namespace meml
