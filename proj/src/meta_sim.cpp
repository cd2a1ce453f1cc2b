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

#include "meml/meta_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "meml/errors.hpp"
#include "meml/parallel.hpp"

namespace meml {

namespace {

StreamKey key_for(const SimContext& ctx, Phase phase, int env, int task, StreamPurpose purpose) {
  StreamKey key;
  key.scenario = ctx.scenario;
  key.replication = ctx.replication;
  key.phase = phase;
  key.environment = static_cast<std::uint64_t>(env);
  key.task = static_cast<std::uint64_t>(task);
  key.purpose = purpose;
  return key;
}

TaskInstance build_instance(TaskParameter task, const ActionSetSpec& spec, int horizon,
                            double noise_R, const SimContext& ctx, Phase phase, int env,
                            int task_index) {
  Engine actions =
      make_engine(ctx.root_seed, key_for(ctx, phase, env, task_index, StreamPurpose::kActions));
  Engine noise =
      make_engine(ctx.root_seed, key_for(ctx, phase, env, task_index, StreamPurpose::kNoise));
  return make_task_instance(std::move(task), spec, horizon, noise_R, actions, noise);
}

}  // namespace

TrainingRecords run_training_phase(const MixtureSpec& mixture, const ActionSetSpec& action_spec,
                                   const std::vector<int>& counts, const BanditParams& params,
                                   const SimContext& ctx) {
  if (static_cast<int>(counts.size()) != mixture.size()) {
    throw ConfigError("training task counts must have one entry per environment");
  }
  TrainingRecords records(counts.size());
  for (std::size_t env = 0; env < counts.size(); ++env) {
    if (counts[env] < 1) throw InsufficientTrainingTasks(static_cast<int>(env));
    records[env].resize(counts[env]);
    const int e = static_cast<int>(env);
    parallel_for(
        counts[env],
        [&](std::size_t j) {
          const int task_index = static_cast<int>(j);
          Engine draw = make_engine(
              ctx.root_seed,
              key_for(ctx, Phase::kTraining, e, task_index, StreamPurpose::kTaskDraw));
          TaskInstance instance =
              build_instance(sample_task_from(mixture, e, draw), action_spec, params.horizon,
                             params.noise_R, ctx, Phase::kTraining, e, task_index);
          TaskRun run = run_biased_oful(instance, Vector::Zero(instance.dim()),
                                        params.param_bound, params);
          run.record.round_robin_estimate = round_robin_prefix_estimate(instance, params);
          records[env][j] = std::move(run.record);
        },
        ctx.workers);
  }
  return records;
}

TaskInstance make_test_instance(const MixtureSpec& mixture, const ActionSetSpec& action_spec,
                                const BanditParams& params, const SimContext& ctx,
                                int task_index) {
  Engine draw = make_engine(
      ctx.root_seed, key_for(ctx, Phase::kTest, 0, task_index, StreamPurpose::kTaskDraw));
  return build_instance(sample_task(mixture, draw), action_spec, params.horizon, params.noise_R,
                        ctx, Phase::kTest, 0, task_index);
}

Engine exploration_engine(const SimContext& ctx, int task_index, Policy policy) {
  StreamKey key = key_for(ctx, Phase::kTest, 0, task_index, StreamPurpose::kExplorationChoice);
  key.policy = static_cast<std::uint64_t>(policy) + 1;
  return make_engine(ctx.root_seed, key);
}

TransferRun run_transfer_tasks(const MixtureSpec& mixture, const ActionSetSpec& action_spec,
                               const TransferSetup& setup, const SimContext& ctx) {
  if (setup.policies.empty()) throw ConfigError("at least one policy is required");
  if (setup.n_test_tasks < 1) throw ConfigError("n_test_tasks must be at least 1");
  setup.meml.validate();
  const BanditParams& params = setup.meml.bandit;

  TransferRun out;
  out.policies = setup.policies;
  out.runs.assign(setup.policies.size(), std::vector<PolicyTaskRun>(setup.n_test_tasks));
  out.final_bias_set = setup.bias_set;

  auto run_task = [&](int i, const BiasSet& bias_set) {
    const TaskInstance instance = make_test_instance(mixture, action_spec, params, ctx, i);
    std::optional<Vector> meml_estimate;
    for (std::size_t p = 0; p < setup.policies.size(); ++p) {
      const Policy policy = setup.policies[p];
      TaskRun run;
      if (policy == Policy::kMemlOful) {
        Engine exploration = exploration_engine(ctx, i, policy);
        run = meml_run_task(setup.meml, bias_set, instance, exploration);
        meml_estimate = run.record.final_unbiased_estimate;
      } else {
        BaselineInputs inputs = setup.baselines;
        inputs.bias_oracle = setup.meml.bias_oracle;
        run = run_baseline_task(policy, inputs, instance, params);
      }
      PolicyTaskRun& slot = out.runs[p][i];
      slot.task_index = i;
      slot.true_environment = instance.task.environment;
      slot.chosen_environment = run.record.chosen_environment;
      slot.trace = std::move(run.trace);
    }
    return meml_estimate;
  };

  if (setup.meml.update_bias_after_task) {
    for (int i = 0; i < setup.n_test_tasks; ++i) {
      const std::optional<Vector> estimate = run_task(i, out.final_bias_set);
      const auto meml_slot = std::find(setup.policies.begin(), setup.policies.end(),
                                       Policy::kMemlOful);
      if (estimate && meml_slot != setup.policies.end()) {
        const auto& chosen = out.runs[meml_slot - setup.policies.begin()][i].chosen_environment;
        if (chosen) out.final_bias_set.absorb(*chosen, *estimate);
      }
    }
  } else {
    parallel_for(
        setup.n_test_tasks,
        [&](std::size_t i) { run_task(static_cast<int>(i), setup.bias_set); }, ctx.workers);
  }
  return out;
}

const PolicyCurve& TransferRegretEstimate::at(Policy policy) const {
  for (const auto& c : curves) {
    if (c.policy == policy) return c;
  }
  throw std::out_of_range("policy " + policy_key(policy) + " was not evaluated");
}

TransferRegretEstimate aggregate_transfer(const std::vector<TransferRun>& runs) {
  TransferRegretEstimate estimate;
  if (runs.empty()) return estimate;
  const auto& policies = runs.front().policies;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    PolicyCurve curve;
    curve.policy = policies[p];
    std::size_t horizon = 0;
    for (const auto& run : runs) {
      if (run.policies != policies) throw RuntimeError("replications evaluated different policies");
      for (const auto& task : run.runs[p]) {
        if (horizon == 0) horizon = task.trace.cumulative.size();
        if (task.trace.cumulative.size() != horizon) {
          throw RuntimeError("regret traces have inconsistent lengths");
        }
      }
    }
    std::vector<double> sum(horizon, 0.0);
    std::vector<double> sum_sq(horizon, 0.0);
    int n = 0;
    for (const auto& run : runs) {
      for (const auto& task : run.runs[p]) {
        for (std::size_t t = 0; t < horizon; ++t) sum[t] += task.trace.cumulative[t];
        ++n;
      }
    }
    curve.n = n;
    curve.mean.resize(horizon);
    for (std::size_t t = 0; t < horizon; ++t) curve.mean[t] = sum[t] / n;
    for (const auto& run : runs) {
      for (const auto& task : run.runs[p]) {
        for (std::size_t t = 0; t < horizon; ++t) {
          const double dev = task.trace.cumulative[t] - curve.mean[t];
          sum_sq[t] += dev * dev;
        }
      }
    }
    curve.stddev.resize(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
      curve.stddev[t] = n > 1 ? std::sqrt(sum_sq[t] / (n - 1)) : 0.0;
    }
    estimate.curves.push_back(std::move(curve));
  }
  return estimate;
}

TransferRegretEstimate evaluate_transfer(const MixtureSpec& mixture,
                                         const ActionSetSpec& action_spec,
                                         const TransferSetup& setup, const SimContext& ctx) {
  return aggregate_transfer({run_transfer_tasks(mixture, action_spec, setup, ctx)});
}

std::vector<MisclassificationRow> misclassification_study(
    const MixtureSpec& mixture, const BiasSet& bias_set, const std::vector<int>& t0_grid,
    int n_tasks, const ActionSetSpec& action_spec, const BanditParams& params,
    const SimContext& ctx) {
  if (t0_grid.empty()) throw ConfigError("T0 grid must be nonempty");
  if (n_tasks < 1) throw ConfigError("misclassification study needs at least one task");
  int max_t0 = 0;
  for (int t0 : t0_grid) {
    if (t0 < 0) throw ConfigError("T0 values must be nonnegative");
    max_t0 = std::max(max_t0, t0);
  }
  BanditParams explore_params = params;
  explore_params.horizon = std::max(1, max_t0);

  // errors[g][i]: task i misclassified at grid point g.
  std::vector<std::vector<char>> errors(t0_grid.size(), std::vector<char>(n_tasks, 0));
  parallel_for(
      n_tasks,
      [&](std::size_t i) {
        const int task = static_cast<int>(i);
        const TaskInstance instance =
            make_test_instance(mixture, action_spec, explore_params, ctx, task);
        for (std::size_t g = 0; g < t0_grid.size(); ++g) {
          Engine exploration = exploration_engine(ctx, task, Policy::kMemlOful);
          const int chosen =
              explore_and_classify(instance, bias_set, t0_grid[g], explore_params, exploration);
          errors[g][i] = chosen != instance.task.environment;
        }
      },
      ctx.workers);

  std::vector<MisclassificationRow> rows;
  for (std::size_t g = 0; g < t0_grid.size(); ++g) {
    MisclassificationRow row;
    row.exploration_rounds = t0_grid[g];
    row.n_tasks = n_tasks;
    for (char e : errors[g]) row.errors += e;
    row.rate = static_cast<double>(row.errors) / n_tasks;
    row.standard_error = std::sqrt(row.rate * (1.0 - row.rate) / n_tasks);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace meml
