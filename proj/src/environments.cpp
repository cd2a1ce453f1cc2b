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

#include "meml/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meml/errors.hpp"

namespace meml {

EntryNoise EntryNoise::gaussian(double sigma) {
  EntryNoise n;
  n.family = Family::kGaussian;
  n.sigma = sigma;
  return n;
}

EntryNoise EntryNoise::truncated_gaussian(double sigma, double radius) {
  EntryNoise n;
  n.family = Family::kTruncatedGaussian;
  n.sigma = sigma;
  n.radius = radius > 0.0 ? radius : 4.0 * sigma;
  return n;
}

EntryNoise EntryNoise::uniform_box(double halfwidth) {
  EntryNoise n;
  n.family = Family::kUniformBox;
  n.halfwidth = halfwidth;
  return n;
}

double EntryNoise::sample(Engine& engine) const {
  switch (family) {
    case Family::kGaussian: {
      if (sigma == 0.0) return 0.0;
      std::normal_distribution<double> normal(0.0, sigma);
      return normal(engine);
    }
    case Family::kTruncatedGaussian: {
      if (sigma == 0.0) return 0.0;
      std::normal_distribution<double> normal(0.0, sigma);
      for (;;) {
        const double z = normal(engine);
        if (std::abs(z) <= radius) return z;
      }
    }
    case Family::kUniformBox: {
      if (halfwidth == 0.0) return 0.0;
      std::uniform_real_distribution<double> uniform(-halfwidth, halfwidth);
      return uniform(engine);
    }
  }
  return 0.0;
}

double EntryNoise::support_bound() const {
  switch (family) {
    case Family::kGaussian:
      return sigma == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    case Family::kTruncatedGaussian:
      return radius;
    case Family::kUniformBox:
      return halfwidth;
  }
  return 0.0;
}

double EntryNoise::scale() const {
  return family == Family::kUniformBox ? halfwidth : sigma;
}

const char* to_string(EntryNoise::Family family) {
  switch (family) {
    case EntryNoise::Family::kGaussian:
      return "gaussian";
    case EntryNoise::Family::kTruncatedGaussian:
      return "truncated_gaussian";
    case EntryNoise::Family::kUniformBox:
      return "uniform_box";
  }
  return "unknown";
}

int MixtureSpec::dim() const {
  return environments.empty() ? 0 : static_cast<int>(environments.front().mean.size());
}

void MixtureSpec::validate() const {
  if (environments.empty()) throw ConfigError("mixture needs at least one environment");
  if (probabilities.size() != environments.size()) {
    throw ConfigError("mixture probabilities must have one entry per environment");
  }
  const int d = dim();
  if (d <= 0) throw ConfigError("environment means must be nonempty");
  double total = 0.0;
  for (std::size_t i = 0; i < environments.size(); ++i) {
    if (environments[i].mean.size() != d) {
      throw ConfigError("environment means must share one dimension");
    }
    if (probabilities[i] < 0.0) throw ConfigError("probabilities must be nonnegative");
    const EntryNoise& n = environments[i].entry_noise;
    if (n.sigma < 0.0 || n.halfwidth < 0.0 || n.radius < 0.0) {
      throw ConfigError("entry noise parameters must be nonnegative");
    }
    total += probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("probabilities must sum to 1");
  if (environments.size() > 1 && !(gamma() > 0.0)) {
    throw ConfigError("identical environment means");
  }
}

double MixtureSpec::gamma() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < environments.size(); ++i) {
    for (std::size_t j = i + 1; j < environments.size(); ++j) {
      best = std::min(best, (environments[i].mean - environments[j].mean).norm());
    }
  }
  return environments.size() < 2 ? 0.0 : best;
}

Vector MixtureSpec::mixture_mean() const {
  Vector mu = Vector::Zero(dim());
  for (std::size_t i = 0; i < environments.size(); ++i) {
    mu += probabilities[i] * environments[i].mean;
  }
  return mu;
}

double MixtureSpec::max_sub_gaussian_K() const {
  double k = 0.0;
  for (const auto& env : environments) k = std::max(k, env.sub_gaussian_K);
  return k;
}

double MixtureSpec::default_param_bound() const {
  double mean_norm = 0.0;
  double scale = 0.0;
  for (const auto& env : environments) {
    mean_norm = std::max(mean_norm, env.mean.norm());
    scale = std::max(scale, env.entry_noise.scale());
  }
  return mean_norm + 4.0 * scale * std::sqrt(static_cast<double>(dim()));
}

TaskParameter sample_task_from(const MixtureSpec& mixture, int environment,
                               Engine& engine) {
  const EnvironmentSpec& env = mixture.environments.at(environment);
  TaskParameter task;
  task.environment = environment;
  task.theta = env.mean;
  for (Eigen::Index k = 0; k < task.theta.size(); ++k) {
    task.theta[k] += env.entry_noise.sample(engine);
  }
  return task;
}

TaskParameter sample_task(const MixtureSpec& mixture, Engine& engine) {
  std::discrete_distribution<int> label(mixture.probabilities.begin(),
                                        mixture.probabilities.end());
  return sample_task_from(mixture, label(engine), engine);
}

ActionSet generate_action_set(const ActionSetSpec& spec, int dim, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ActionSet arms;
  arms.reserve(spec.arms_per_round);
  for (int a = 0; a < spec.arms_per_round; ++a) {
    Vector x(dim);
    double norm = 0.0;
    do {
      for (int k = 0; k < dim; ++k) x[k] = normal(engine);
      norm = x.norm();
    } while (norm == 0.0);
    arms.push_back(x * (spec.norm_bound / norm));
  }
  return arms;
}

std::vector<ActionSet> generate_action_sets(const ActionSetSpec& spec, int dim,
                                            int horizon, Engine& engine) {
  std::vector<ActionSet> sets;
  sets.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    if (spec.regeneration == ActionSetSpec::Regeneration::kFixedAcrossRounds && t > 0) {
      sets.push_back(sets.front());
    } else {
      sets.push_back(generate_action_set(spec, dim, engine));
    }
  }
  return sets;
}

double sample_noise(double noise_R, Engine& engine) {
  if (noise_R == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, noise_R);
  return normal(engine);
}

double TaskInstance::best_reward(int round) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& x : action_sets.at(round)) best = std::max(best, expected_reward(x));
  return best;
}

TaskInstance make_task_instance(TaskParameter task, const ActionSetSpec& spec,
                                int horizon, double noise_R, Engine& actions_engine,
                                Engine& noise_engine) {
  TaskInstance instance;
  const int dim = static_cast<int>(task.theta.size());
  instance.task = std::move(task);
  instance.action_sets = generate_action_sets(spec, dim, horizon, actions_engine);
  instance.noise.reserve(horizon);
  for (int t = 0; t < horizon; ++t) instance.noise.push_back(sample_noise(noise_R, noise_engine));
  return instance;
}

AssumptionReport assumption_diagnostics(const MixtureSpec& mixture,
                                        std::int64_t n_samples, Engine& engine) {
  if (n_samples < 1000) throw ConfigError("assumption diagnostics need n_samples >= 1000");
  mixture.validate();

  AssumptionReport report;
  report.n_samples = n_samples;
  report.gamma = mixture.gamma();
  report.mixture_mean = mixture.mixture_mean();

  const double n = static_cast<double>(n_samples);
  for (int nu = 0; nu < mixture.size(); ++nu) {
    EnvironmentDiagnostics diag;
    for (std::int64_t s = 0; s < n_samples; ++s) {
      const TaskParameter task = sample_task_from(mixture, nu, engine);
      diag.variance_about_mean += (task.theta - mixture.environments[nu].mean).squaredNorm();
      diag.second_moment += task.theta.squaredNorm();
    }
    diag.variance_about_mean /= n;
    diag.second_moment /= n;
    diag.ratio = diag.second_moment > 0.0 ? diag.variance_about_mean / diag.second_moment : 0.0;
    diag.below_gamma = diag.variance_about_mean < report.gamma;
    report.environments.push_back(diag);
  }

  for (std::int64_t s = 0; s < n_samples; ++s) {
    const TaskParameter task = sample_task(mixture, engine);
    report.pooled_variance += (task.theta - report.mixture_mean).squaredNorm();
    report.pooled_second_moment += task.theta.squaredNorm();
  }
  report.pooled_variance /= n;
  report.pooled_second_moment /= n;
  return report;
}

}  // namespace meml
