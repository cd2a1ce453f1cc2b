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
#include <string>
#include <vector>

#include "meml/rls.hpp"
#include "meml/rng.hpp"

namespace meml {

// Distribution of the i.i.d. entries of z in theta = mu + z.
struct EntryNoise {
  enum class Family { kGaussian, kTruncatedGaussian, kUniformBox };

  Family family = Family::kGaussian;
  double sigma = 0.0;      // kGaussian, kTruncatedGaussian
  double radius = 0.0;     // kTruncatedGaussian: |z_k| <= radius
  double halfwidth = 0.0;  // kUniformBox: z_k ~ U[-halfwidth, halfwidth]

  static EntryNoise gaussian(double sigma);
  // Rejection-sampled Gaussian; radius <= 0 selects the default 4 sigma.
  static EntryNoise truncated_gaussian(double sigma, double radius = 0.0);
  static EntryNoise uniform_box(double halfwidth);

  double sample(Engine& engine) const;

  // Largest value any entry can take in absolute value (infinite for kGaussian).
  double support_bound() const;
  // Per-entry scale used for the default S and K: sigma or halfwidth.
  double scale() const;
};

const char* to_string(EntryNoise::Family family);

struct EnvironmentSpec {
  Vector mean;
  EntryNoise entry_noise;
  double sub_gaussian_K = 0.0;
};

struct MixtureSpec {
  std::vector<EnvironmentSpec> environments;
  std::vector<double> probabilities;

  int dim() const;
  int size() const { return static_cast<int>(environments.size()); }

  // Throws ConfigError on inconsistent dimensions, probabilities that are
  // negative or do not sum to one, or two environments with the same mean.
  void validate() const;

  // Minimum pairwise distance between environment means.
  double gamma() const;
  // sum_nu p_nu mu_nu.
  Vector mixture_mean() const;
  double max_sub_gaussian_K() const;
  // max_nu ||mu_nu|| + 4 * max_nu scale_nu * sqrt(d).
  double default_param_bound() const;
};

struct TaskParameter {
  Vector theta;
  int environment = 0;  // zero-based
};

TaskParameter sample_task(const MixtureSpec& mixture, Engine& engine);
// Draws theta from one environment, skipping the multinomial label draw.
TaskParameter sample_task_from(const MixtureSpec& mixture, int environment,
                               Engine& engine);

struct ActionSetSpec {
  enum class Regeneration { kFreshEachRound, kFixedAcrossRounds };

  int arms_per_round = 10;
  double norm_bound = 1.0;
  Regeneration regeneration = Regeneration::kFreshEachRound;
};

using ActionSet = std::vector<Vector>;

// `arms_per_round` vectors uniform on the sphere of radius L.
ActionSet generate_action_set(const ActionSetSpec& spec, int dim, Engine& engine);

// Action sets for rounds 1..horizon, honoring the regeneration mode.
std::vector<ActionSet> generate_action_sets(const ActionSetSpec& spec, int dim,
                                            int horizon, Engine& engine);

// One Gaussian draw with standard deviation R.
double sample_noise(double noise_R, Engine& engine);

// Everything the world contributes to one task: the parameter, the action set
// of every round and the reward noise of every round. Policies read from a
// shared instance, which is what couples them on identical tasks.
struct TaskInstance {
  TaskParameter task;
  std::vector<ActionSet> action_sets;
  std::vector<double> noise;

  int horizon() const { return static_cast<int>(action_sets.size()); }
  int dim() const { return static_cast<int>(task.theta.size()); }
  double expected_reward(const Vector& action) const { return action.dot(task.theta); }
  // max over the round's action set of x^T theta.
  double best_reward(int round) const;
};

TaskInstance make_task_instance(TaskParameter task, const ActionSetSpec& spec,
                                int horizon, double noise_R, Engine& actions_engine,
                                Engine& noise_engine);

struct EnvironmentDiagnostics {
  double variance_about_mean = 0.0;  // E ||theta - mu_nu||^2
  double second_moment = 0.0;        // E ||theta||^2
  double ratio = 0.0;                // variance_about_mean / second_moment
  bool below_gamma = false;          // variance_about_mean < gamma
};

struct AssumptionReport {
  std::vector<EnvironmentDiagnostics> environments;
  double gamma = 0.0;
  Vector mixture_mean;
  double pooled_variance = 0.0;       // E ||theta - mu||^2 under the mixture
  double pooled_second_moment = 0.0;  // E ||theta||^2 under the mixture
  std::int64_t n_samples = 0;
};

// Monte Carlo estimates of the per-environment and pooled variance/second
// moment conditions. Throws ConfigError if n_samples < 1000.
AssumptionReport assumption_diagnostics(const MixtureSpec& mixture,
                                        std::int64_t n_samples, Engine& engine);

}  // namespace meml
