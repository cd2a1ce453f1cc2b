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

#include "meml/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "meml/errors.hpp"

namespace meml {

T0Result compute_t0(double gamma, double K, int d, double noise_R, double delta, int n1,
                    int n2) {
  T0Result out;
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (n1 < 1 || n2 < 1) throw ConfigError("training counts must be positive");

  out.delta_lower = K > 0.0 ? 0.5 * std::exp(-gamma * gamma / (4.0 * K * K)) : 0.0;
  out.delta_admissible = delta > out.delta_lower && delta < 1.0;

  if (!(gamma > 0.0)) {
    out.reason = "identical environment means";
    return out;
  }
  const double inv_n = 1.0 / n1 + 1.0 / n2;
  out.n_condition = gamma * gamma >= K * std::sqrt(d * inv_n);
  const double log_term = std::log(4.0 / delta);
  out.denominator = gamma - std::pow(K * K * d * inv_n, 0.25) - 2.0 * K * std::sqrt(log_term);
  if (!out.n_condition) {
    out.reason = "training-count condition gamma^2 >= K sqrt(d (1/N1 + 1/N2)) violated";
    return out;
  }
  if (!(out.denominator > 0.0)) {
    out.reason = "denominator nonpositive";
    return out;
  }
  out.raw = noise_R * std::sqrt(d * log_term) / out.denominator;
  out.rounds = std::max(1, static_cast<int>(std::ceil(out.raw)));
  return out;
}

double biased_oful_regret_bound(int horizon, int d, double lambda, double action_norm_bound,
                                double noise_R, double bias_distance) {
  const double T = horizon;
  const double L = action_norm_bound;
  const double width = std::sqrt(T * d * std::log1p(T * L / (lambda * d)));
  const double radius =
      noise_R * std::sqrt(d * std::log(T + T * T * L / (lambda * d))) +
      std::sqrt(lambda) * bias_distance;
  return width * radius;
}

double single_environment_transfer_bound(int horizon, int d, double action_norm_bound,
                                         double variance) {
  const double T = horizon;
  return d * std::sqrt(T * std::log1p(T * T * action_norm_bound * variance / d));
}

namespace {

void check_weights(const std::vector<double>& p, std::size_t n, const char* what) {
  if (p.size() != n) throw ConfigError(std::string(what) + " needs one value per environment");
}

}  // namespace

double per_environment_transfer_bound(int horizon, int t0, int d, double action_norm_bound,
                                      const std::vector<double>& probabilities,
                                      const std::vector<double>& variances) {
  check_weights(variances, probabilities.size(), "variances");
  const double T = horizon;
  const double rest = std::max(0, horizon - t0);
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    total += probabilities[i] *
             (2.0 * t0 +
              d * std::sqrt(rest * std::log1p(T * T * action_norm_bound * variances[i] / d)));
  }
  return total;
}

double meml_transfer_bound(int horizon, int t0, int d, double action_norm_bound,
                           const std::vector<double>& probabilities,
                           const std::vector<double>& variances,
                           const std::vector<double>& tau) {
  check_weights(variances, probabilities.size(), "variances");
  check_weights(tau, probabilities.size(), "tau");
  const int explored = std::min(horizon, t0);
  const double rest = horizon - explored;
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double spread = variances[i] + tau[i];
    total += probabilities[i] *
             (2.0 * explored +
              d * std::sqrt(rest * std::log1p(rest * rest * action_norm_bound * spread / d)));
  }
  return total;
}

double tau_sqrt_bound(double param_bound, double delta, double second_moment, int n_env,
                      double training_width, double gamma, int n_total) {
  if (n_env < 1 || n_total < 1) throw ConfigError("training counts must be positive");
  const double S = param_bound;
  return 2.0 * S * std::log(2.0 / delta) * std::sqrt(second_moment) / n_env + training_width +
         delta * (gamma + 2.0 * S / n_total);
}

BoundReport evaluate_bounds(const BoundInputs& in) {
  const std::size_t m = in.probabilities.size();
  check_weights(in.variances, m, "variances");
  check_weights(in.second_moments, m, "second moments");
  if (in.training_counts.size() != m) {
    throw ConfigError("training counts need one value per environment");
  }
  check_weights(in.training_widths, m, "training widths");

  BoundReport report;
  const int n_total = std::accumulate(in.training_counts.begin(), in.training_counts.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const double root = tau_sqrt_bound(in.param_bound, in.delta, in.second_moments[i],
                                       in.training_counts[i], in.training_widths[i], in.gamma,
                                       n_total);
    report.tau_bound.push_back(root * root);
  }

  // The closed-form T0 rule is stated for two environments; with more, use
  // the two smallest training counts.
  std::vector<int> counts = in.training_counts;
  std::sort(counts.begin(), counts.end());
  const int n1 = counts.empty() ? 1 : counts[0];
  const int n2 = counts.size() > 1 ? counts[1] : n1;
  report.t0 = compute_t0(in.gamma, in.K, in.dim, in.noise_R, in.delta, n1, n2);
  report.n_condition_satisfied = report.t0.n_condition;

  for (int t = 1; t <= in.horizon; ++t) {
    report.single_task_curve.push_back(biased_oful_regret_bound(
        t, in.dim, in.lambda, in.action_norm_bound, in.noise_R, in.bias_distance));
    report.single_bias_transfer_curve.push_back(
        single_environment_transfer_bound(t, in.dim, in.action_norm_bound, in.pooled_variance));
    report.meml_transfer_curve.push_back(meml_transfer_bound(t, in.t0, in.dim,
                                                             in.action_norm_bound,
                                                             in.probabilities, in.variances,
                                                             report.tau_bound));
  }
  return report;
}

std::vector<double> training_widths(const TrainingRecords& training, const BanditParams& params) {
  std::vector<double> widths;
  for (const auto& records : training) {
    double widest = 0.0;
    for (const auto& r : records) {
      const int d = static_cast<int>(r.final_unbiased_estimate.size());
      ConfidenceParams conf = params.confidence(d);
      conf.delta = 1.0 / params.horizon;
      const double beta = oful_radius(params.horizon, conf, params.param_bound);
      widest = std::max(widest,
                        beta / std::sqrt(params.lambda + std::max(0.0, r.final_gram_min_eigenvalue)));
    }
    widths.push_back(widest);
  }
  return widths;
}

}  // namespace meml
