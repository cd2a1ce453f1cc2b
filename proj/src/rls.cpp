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

#include "meml/rls.hpp"

#include <cmath>
#include <sstream>

#include "meml/errors.hpp"

namespace meml {

namespace {

constexpr double kNormSlack = 1e-9;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << "delta must lie in (0, 1], got " << delta;
    throw ConfigError(msg.str());
  }
}

double data_term(std::int64_t t, const ConfidenceParams& p) {
  check_delta(p.delta);
  if (!(p.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (t < 0) throw ConfigError("round index must be nonnegative");
  const double L2 = p.action_norm_bound * p.action_norm_bound;
  const double arg = (1.0 + static_cast<double>(t) * L2 / p.lambda) / p.delta;
  // arg >= 1 whenever delta <= 1, so the log is nonnegative.
  return p.noise_R * std::sqrt(p.dim * std::log(arg));
}

}  // namespace

OnlineRls::OnlineRls(int dim, double lambda, double action_norm_bound)
    : dim_(dim),
      lambda_(lambda),
      action_norm_bound_(action_norm_bound),
      gram_(Matrix::Zero(dim, dim)),
      gram_reg_inverse_(Matrix::Identity(dim, dim) / lambda),
      response_sum_(Vector::Zero(dim)) {
  if (dim <= 0) throw ConfigError("dimension must be positive");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
}

void OnlineRls::update(const Vector& action, double reward) {
  if (action.size() != dim_) {
    std::ostringstream msg;
    msg << "action dimension " << action.size() << " does not match state dimension "
        << dim_;
    throw ConfigError(msg.str());
  }
  if (action.norm() > action_norm_bound_ * (1.0 + kNormSlack)) {
    std::ostringstream msg;
    msg << "action norm " << action.norm() << " exceeds bound " << action_norm_bound_;
    throw ConfigError(msg.str());
  }

  gram_.noalias() += action * action.transpose();
  response_sum_ += reward * action;
  ++round_count_;

  if (round_count_ % kRefreshInterval == 0) {
    refresh_inverse();
    return;
  }
  const Vector u = gram_reg_inverse_ * action;
  const double denom = 1.0 + action.dot(u);
  gram_reg_inverse_.noalias() -= (u * u.transpose()) / denom;
  gram_reg_inverse_ = 0.5 * (gram_reg_inverse_ + gram_reg_inverse_.transpose()).eval();
}

void OnlineRls::refresh_inverse() {
  gram_reg_inverse_ =
      regularized_gram().llt().solve(Matrix::Identity(dim_, dim_));
}

Vector OnlineRls::estimate() const { return gram_reg_inverse_ * response_sum_; }

Vector OnlineRls::biased_estimate(const Vector& bias) const {
  if (bias.size() != dim_) {
    throw ConfigError("bias dimension does not match state dimension");
  }
  return gram_reg_inverse_ * (response_sum_ - gram_ * bias) + bias;
}

Matrix OnlineRls::regularized_gram() const {
  return gram_ + lambda_ * Matrix::Identity(dim_, dim_);
}

double OnlineRls::inverse_norm(const Vector& x) const {
  return std::sqrt(std::max(0.0, x.dot(gram_reg_inverse_ * x)));
}

double oful_radius(std::int64_t t, const ConfidenceParams& params,
                   double param_bound) {
  return data_term(t, params) + std::sqrt(params.lambda) * param_bound;
}

double biased_radius(std::int64_t t, const ConfidenceParams& params,
                     double bias_distance) {
  if (bias_distance < 0.0) throw ConfigError("bias distance must be nonnegative");
  return data_term(t, params) + std::sqrt(params.lambda) * bias_distance;
}

bool ConfidenceEllipsoid::contains(const Vector& v, double tolerance) const {
  const Vector diff = v - center;
  const double norm = std::sqrt(std::max(0.0, diff.dot(shape * diff)));
  return norm <= radius + tolerance;
}

double ellipsoid_ucb(const Vector& action, const ConfidenceEllipsoid& ellipsoid,
                     const Matrix& shape_inverse) {
  const double spread = std::sqrt(std::max(0.0, action.dot(shape_inverse * action)));
  return action.dot(ellipsoid.center) + ellipsoid.radius * spread;
}

void BiasOracleConfig::validate(double param_bound) const {
  if (mode != Mode::kConstantUpperBound) return;
  if (constant_bound < 0.0) {
    throw ConfigError("bias_oracle.bound must be nonnegative");
  }
  if (constant_bound > 2.0 * param_bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "bias_oracle.bound " << constant_bound << " exceeds 2S = " << 2.0 * param_bound;
    throw ConfigError(msg.str());
  }
}

double BiasOracleConfig::distance(const Vector& bias, const Vector& theta) const {
  if (mode == Mode::kTrueParameter) return (bias - theta).norm();
  return constant_bound;
}

const char* to_string(BiasOracleConfig::Mode mode) {
  return mode == BiasOracleConfig::Mode::kTrueParameter ? "true-parameter"
                                                          : "constant-upper-bound";
}

}  // namespace meml
