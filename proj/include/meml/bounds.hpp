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
#include <string>
#include <vector>

#include "meml/meta_sim.hpp"

namespace meml {

// Theoretical regret bounds and the exploration-length rule, evaluated with
// every unspecified universal constant (C and the O(.) factor) set to 1. The
// resulting curves describe shape up to constants, not absolute values.

struct T0Result {
  std::optional<int> rounds;   // ceil of the formula; empty when infeasible
  double raw = 0.0;            // unrounded value (0 when infeasible)
  double denominator = 0.0;
  bool n_condition = false;    // gamma^2 >= K sqrt(d (1/N1 + 1/N2))
  std::string reason;          // why it is infeasible, empty otherwise
  double delta_lower = 0.0;    // admissible delta lies in (delta_lower, 1)
  bool delta_admissible = false;

  bool feasible() const { return rounds.has_value(); }
};

// R sqrt(d log(4/delta)) / (gamma - (K^2 d (1/N1 + 1/N2))^(1/4) - 2K sqrt(log(4/delta))),
// rounded up and at least 1. Infeasible (not an exception) when gamma is 0,
// the training-count condition fails, or the denominator is nonpositive.
T0Result compute_t0(double gamma, double K, int d, double noise_R, double delta, int n1,
                    int n2);

// Expected regret of biased OFUL over `horizon` rounds with bias error
// ||h - theta|| = bias_distance.
double biased_oful_regret_bound(int horizon, int d, double lambda, double action_norm_bound,
                                double noise_R, double bias_distance);

// Transfer regret of biased OFUL on one environment whose tasks satisfy
// E ||theta - h||^2 = variance:  d sqrt(T log(1 + T^2 L variance / d)).
double single_environment_transfer_bound(int horizon, int d, double action_norm_bound,
                                         double variance);

// sum_i p_i (2 T0 + d sqrt((T - T0) log(1 + T^2 L Var_i / d))): the
// per-environment bound obtained with exact per-environment biases.
double per_environment_transfer_bound(int horizon, int t0, int d, double action_norm_bound,
                                      const std::vector<double>& probabilities,
                                      const std::vector<double>& variances);

// MEML-OFUL transfer-regret bound: sum_i p_i (2 T0 + d sqrt((T-T0) log(1 +
// (T-T0)^2 L (Var_i + tau_i) / d))). Rounds before T0 contribute 2 per round.
double meml_transfer_bound(int horizon, int t0, int d, double action_norm_bound,
                           const std::vector<double>& probabilities,
                           const std::vector<double>& variances,
                           const std::vector<double>& tau);

struct BoundInputs {
  int horizon = 70;
  int dim = 2;
  double lambda = 1.0;
  double delta = 0.1;
  double noise_R = 0.1;
  double action_norm_bound = 1.0;
  double param_bound = 1.0;
  int t0 = 5;
  std::vector<double> probabilities;
  std::vector<double> variances;       // Var^i about mu_i
  std::vector<double> second_moments;  // E ||theta||^2 per environment
  double pooled_variance = 0.0;        // E ||theta - mu||^2 under the mixture
  double bias_distance = 0.0;          // ||h - theta|| for the single-task curve
  double gamma = 0.0;
  double K = 0.0;
  std::vector<int> training_counts;
  // max_j beta_{j,T}(1/T) / sqrt(lambda + lambda_min(V_{j,T})) per environment.
  std::vector<double> training_widths;
};

struct BoundReport {
  std::vector<double> single_task_curve;           // biased_oful_regret_bound, T' = 1..T
  std::vector<double> single_bias_transfer_curve;  // pooled single-environment transfer bound
  std::vector<double> meml_transfer_curve;         // meml_transfer_bound
  T0Result t0;
  std::vector<double> tau_bound;                   // per environment, already squared
  bool n_condition_satisfied = false;
  std::string constant_policy = "C=1";
};

// sqrt(tau_i) <= 2 S log(2/delta) sqrt(E||theta||^2_i) / N_i + width_i + delta (gamma + 2S/N).
double tau_sqrt_bound(double param_bound, double delta, double second_moment, int n_env,
                      double training_width, double gamma, int n_total);

BoundReport evaluate_bounds(const BoundInputs& inputs);

// Per-environment max_j beta_{j,T}(1/T) / sqrt(lambda + lambda_min(V_{j,T})).
std::vector<double> training_widths(const TrainingRecords& training, const BanditParams& params);

}  // namespace meml
