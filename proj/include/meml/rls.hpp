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
#include <limits>

#include <Eigen/Dense>

namespace meml {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Online ridge regression for a single task.
//
// Keeps the raw Gram matrix (without the ridge term), the response sum and
// the inverse of the regularized Gram matrix. The inverse is maintained with
// a Sherman-Morrison rank-one update and rebuilt from scratch every
// kRefreshInterval updates to cap floating-point drift.
class OnlineRls {
 public:
  static constexpr std::int64_t kRefreshInterval = 256;

  OnlineRls(int dim, double lambda,
            double action_norm_bound = std::numeric_limits<double>::infinity());

  // Adds one (action, reward) observation. Throws ConfigError on a dimension
  // mismatch or an action whose norm exceeds the configured bound.
  void update(const Vector& action, double reward);

  // Ridge estimate (lambda I + gram)^-1 * response_sum.
  Vector estimate() const;

  // Ridge estimate shrunk towards `bias` instead of the origin:
  // (lambda I + gram)^-1 (response_sum - gram * bias) + bias.
  Vector biased_estimate(const Vector& bias) const;

  // lambda I + gram.
  Matrix regularized_gram() const;

  // sqrt(x^T (lambda I + gram)^-1 x).
  double inverse_norm(const Vector& x) const;

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double action_norm_bound() const { return action_norm_bound_; }
  const Matrix& gram() const { return gram_; }
  const Matrix& gram_reg_inverse() const { return gram_reg_inverse_; }
  const Vector& response_sum() const { return response_sum_; }
  std::int64_t round_count() const { return round_count_; }

 private:
  void refresh_inverse();

  int dim_;
  double lambda_;
  double action_norm_bound_;
  Matrix gram_;
  Matrix gram_reg_inverse_;
  Vector response_sum_;
  std::int64_t round_count_ = 0;
};

// Inputs shared by the OFUL and biased-OFUL confidence radii.
struct ConfidenceParams {
  int dim = 1;
  double lambda = 1.0;
  double action_norm_bound = 1.0;  // L
  double noise_R = 0.1;            // sub-Gaussian constant of the reward noise
  double delta = 0.1;              // confidence level, in (0, 1]
};

// R sqrt(d log((1 + t L^2 / lambda) / delta)) + sqrt(lambda) * S.
// delta = 1 is accepted as the limiting case; anything outside (0, 1] throws
// ConfigError.
double oful_radius(std::int64_t t, const ConfidenceParams& params,
                   double param_bound);

// Same data term as oful_radius, with sqrt(lambda) * ||h - theta||_2 in place
// of sqrt(lambda) * S.
double biased_radius(std::int64_t t, const ConfidenceParams& params,
                     double bias_distance);

// {v : ||v - center||_shape <= radius}.
struct ConfidenceEllipsoid {
  Vector center;
  Matrix shape;
  double radius = 0.0;

  bool contains(const Vector& v, double tolerance = 0.0) const;
};

// Closed-form max over v in the ellipsoid of x^T v:
// x^T center + radius * sqrt(x^T shape^-1 x).
double ellipsoid_ucb(const Vector& action, const ConfidenceEllipsoid& ellipsoid,
                     const Matrix& shape_inverse);

// Source of the ||h - theta||_2 term in the biased radius.
//
// kTrueParameter reads the task's real parameter and is only meant for
// diagnostics; kConstantUpperBound uses a fixed bound (at most 2S).
struct BiasOracleConfig {
  enum class Mode { kTrueParameter, kConstantUpperBound };

  Mode mode = Mode::kConstantUpperBound;
  double constant_bound = 0.0;

  // Throws ConfigError when the constant bound is negative or exceeds 2S.
  void validate(double param_bound) const;

  double distance(const Vector& bias, const Vector& theta) const;
};

const char* to_string(BiasOracleConfig::Mode mode);

}  // namespace meml
