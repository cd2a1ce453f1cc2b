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

#include <cmath>

#include <gtest/gtest.h>

#include "meml/bounds.hpp"
#include "meml/errors.hpp"

namespace meml {
namespace {

TEST(T0Rule, InfeasibleForTwoGaussianSetupWithUnitK) {
  const T0Result r = compute_t0(2.0 * std::sqrt(2.0), 1.0, 2, 0.1, 0.1, 10, 10);
  EXPECT_FALSE(r.feasible());
  EXPECT_TRUE(r.n_condition);
  EXPECT_EQ(r.reason, "denominator nonpositive");
  EXPECT_NEAR(r.denominator, -1.80813476930054360825, 1e-12);
}

TEST(T0Rule, ScalarEvaluation) {
  const T0Result r = compute_t0(8.0, 0.1, 2, 10.0, 0.1, 10, 10);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.raw, 3.68829620865005932947, 1e-12);
  EXPECT_EQ(*r.rounds, 4);
}

TEST(T0Rule, VanishingKLimit) {
  const T0Result r = compute_t0(8.0, 0.0, 2, 10.0, 0.1, 1000000, 1000000);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.raw, 10.0 * std::sqrt(2.0 * std::log(40.0)) / 8.0, 1e-12);
  EXPECT_EQ(*r.rounds, 4);
}

TEST(T0Rule, AtLeastOneRound) {
  const T0Result r = compute_t0(8.0, 0.1, 2, 0.1, 0.1, 10, 10);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(*r.rounds, 1);
}

TEST(T0Rule, InfeasibilityReasons) {
  EXPECT_EQ(compute_t0(0.0, 1.0, 2, 0.1, 0.1, 10, 10).reason, "identical environment means");
  const T0Result few = compute_t0(0.1, 1.0, 2, 0.1, 0.1, 1, 1);
  EXPECT_FALSE(few.feasible());
  EXPECT_FALSE(few.n_condition);
  EXPECT_NE(few.reason.find("training-count condition"), std::string::npos);
  EXPECT_EQ(compute_t0(2.0, 50.0, 2, 0.1, 0.1, 1000000, 1000000).reason,
            "denominator nonpositive");
  EXPECT_THROW(compute_t0(2.0, 1.0, 2, 0.1, 1.0, 10, 10), ConfigError);
  EXPECT_THROW(compute_t0(2.0, 1.0, 2, 0.1, 0.0, 10, 10), ConfigError);
}

TEST(T0Rule, DeltaInterval) {
  const T0Result r = compute_t0(2.0 * std::sqrt(2.0), std::sqrt(0.5), 2, 0.1, 1.0 / 70, 10, 10);
  EXPECT_NEAR(r.delta_lower, 0.5 * std::exp(-8.0 / (4.0 * 0.5)), 1e-15);
  EXPECT_TRUE(r.delta_admissible);
}

TEST(Bounds, BiasedOfulScalarEvaluation) {
  EXPECT_NEAR(biased_oful_regret_bound(70, 2, 1.0, 1.0, 0.1, 0.5), 20.0640821666641764352, 1e-10);
}

TEST(Bounds, BiasedOfulShrinksWithRegularization) {
  double previous = biased_oful_regret_bound(70, 2, 1.0, 1.0, 0.1, 0.0);
  for (double lambda = 10.0; lambda <= 1e12; lambda *= 10.0) {
    const double now = biased_oful_regret_bound(70, 2, lambda, 1.0, 0.1, 0.0);
    EXPECT_LT(now, previous);
    previous = now;
  }
  EXPECT_NEAR(biased_oful_regret_bound(70, 2, 1e12, 1.0, 0.1, 0.0), 2.04047184179782547568e-5,
              1e-15);
}

TEST(Bounds, SingleEnvironmentTransfer) {
  EXPECT_EQ(single_environment_transfer_bound(500, 3, 1.0, 0.0), 0.0);
  EXPECT_NEAR(single_environment_transfer_bound(70, 2, 1.0, 0.5), 44.6231262084910841412, 1e-10);
}

TEST(Bounds, PerEnvironmentAndPooledAtLongHorizon) {
  const double eq10 = per_environment_transfer_bound(10000, 2, 2, 1.0, {0.5, 0.5}, {1.0, 1.0});
  EXPECT_NEAR(eq10, 845.997341484537977843, 1e-8);
  EXPECT_NEAR(single_environment_transfer_bound(10000, 2, 1.0, 1.0), 842.081553850751915703,
              1e-8);
  EXPECT_NEAR(single_environment_transfer_bound(10000, 2, 1.0, 3.0), 867.782135301878555527,
              1e-8);
}

TEST(Bounds, MemlTransferScalarEvaluation) {
  EXPECT_NEAR(meml_transfer_bound(70, 2, 2, 1.0, {0.3, 0.7}, {1.0, 1.5}, {0.2, 0.4}),
              51.3673498966981402649, 1e-10);
  EXPECT_DOUBLE_EQ(meml_transfer_bound(2, 2, 2, 1.0, {0.5, 0.5}, {1.0, 1.0}, {0.0, 0.0}), 4.0);
}

TEST(Bounds, TauScalarEvaluation) {
  EXPECT_NEAR(tau_sqrt_bound(5.0, 0.1, 3.0, 10, 0.2, 2.83, 20), 5.72176050366933892616, 1e-12);
}

TEST(Bounds, ReportCurvesHaveHorizonLength) {
  BoundInputs in;
  in.horizon = 30;
  in.dim = 2;
  in.delta = 1.0 / 30;
  in.t0 = 2;
  in.param_bound = 6.0;
  in.probabilities = {0.5, 0.5};
  in.variances = {1.0, 1.0};
  in.second_moments = {3.0, 19.0};
  in.pooled_variance = 3.0;
  in.bias_distance = 1.0;
  in.gamma = 2.0 * std::sqrt(2.0);
  in.K = std::sqrt(0.5);
  in.training_counts = {10, 10};
  in.training_widths = {0.3, 0.3};
  const BoundReport r = evaluate_bounds(in);
  EXPECT_EQ(r.single_task_curve.size(), 30u);
  EXPECT_EQ(r.single_bias_transfer_curve.size(), 30u);
  EXPECT_EQ(r.meml_transfer_curve.size(), 30u);
  EXPECT_EQ(r.tau_bound.size(), 2u);
  EXPECT_EQ(r.constant_policy, "C=1");
  for (std::size_t t = 1; t < 30; ++t) {
    EXPECT_GE(r.single_task_curve[t], r.single_task_curve[t - 1]);
    EXPECT_GE(r.meml_transfer_curve[t], r.meml_transfer_curve[t - 1]);
  }
}

}  // namespace
}  // namespace meml
