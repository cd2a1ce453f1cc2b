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

#include "meml/environments.hpp"
#include "meml/errors.hpp"
#include "support.hpp"

namespace meml {
namespace {

using testing::two_gaussians;
using testing::vec;

TEST(Mixture, DegenerateProbabilitiesAlwaysPickFirst) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0, 1.0);
  Engine eng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_task(m, eng).environment, 0);
}

TEST(Mixture, ZeroVarianceReturnsMean) {
  auto m = two_gaussians(vec({1, -2}), vec({3, 3}), 0.0);
  Engine eng(2);
  for (int i = 0; i < 100; ++i) {
    const auto t = sample_task(m, eng);
    EXPECT_EQ(t.theta, m.environments[t.environment].mean);
  }
}

TEST(Mixture, LabelFrequencyAndTaskVariance) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0);
  Engine eng(3);
  const int n = 10000;
  int first = 0;
  double spread = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto t = sample_task(m, eng);
    first += t.environment == 0;
    spread += (t.theta - m.environments[t.environment].mean).squaredNorm();
  }
  EXPECT_NEAR(static_cast<double>(first) / n, 0.5, 0.015);
  EXPECT_NEAR(spread / n, 1.0, 0.05);
}

TEST(Mixture, ValidationMessages) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0);
  m.probabilities = {0.6, 0.6};
  try {
    m.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("probabilities must sum to 1"), std::string::npos);
  }
  auto same = two_gaussians(vec({1, 1}), vec({1, 1}), 1.0);
  EXPECT_THROW(same.validate(), ConfigError);
}

TEST(Mixture, GammaAndMixtureMean) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0);
  EXPECT_DOUBLE_EQ(m.gamma(), 2.0 * std::sqrt(2.0));
  EXPECT_LT((m.mixture_mean() - vec({2, 2})).norm(), 1e-15);
}

TEST(EntryNoise, BoundedFamiliesStayInSupport) {
  Engine eng(4);
  const auto trunc = EntryNoise::truncated_gaussian(1.0, 1.5);
  const auto box = EntryNoise::uniform_box(0.25);
  EXPECT_EQ(trunc.support_bound(), 1.5);
  EXPECT_EQ(box.support_bound(), 0.25);
  EXPECT_TRUE(std::isinf(EntryNoise::gaussian(1.0).support_bound()));
  EXPECT_EQ(EntryNoise::truncated_gaussian(2.0).radius, 8.0);
  for (int i = 0; i < 20000; ++i) {
    EXPECT_LE(std::abs(trunc.sample(eng)), 1.5);
    EXPECT_LE(std::abs(box.sample(eng)), 0.25);
  }
}

TEST(EntryNoise, UniformBoxVariance) {
  Engine eng(5);
  const auto box = EntryNoise::uniform_box(1.0);
  double s = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = box.sample(eng);
    s += z * z;
  }
  EXPECT_NEAR(s / n, 1.0 / 3.0, 0.01);
}

TEST(ActionSets, UnitNormVectors) {
  Engine eng(6);
  ActionSetSpec spec;
  for (const auto& x : generate_action_set(spec, 5, eng)) EXPECT_NEAR(x.norm(), 1.0, 1e-12);
  spec.norm_bound = 2.5;
  for (const auto& x : generate_action_set(spec, 3, eng)) EXPECT_NEAR(x.norm(), 2.5, 1e-12);
}

TEST(ActionSets, UniformOnTheCircle) {
  Engine eng(7);
  ActionSetSpec spec;
  spec.arms_per_round = 1;
  Vector sum = Vector::Zero(2);
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += generate_action_set(spec, 2, eng).front();
  EXPECT_LE((sum / n).norm(), 0.02);
}

TEST(ActionSets, RegenerationModes) {
  Engine eng(8);
  ActionSetSpec spec;
  spec.regeneration = ActionSetSpec::Regeneration::kFixedAcrossRounds;
  const auto fixed = generate_action_sets(spec, 2, 5, eng);
  ASSERT_EQ(fixed.size(), 5u);
  for (const auto& set : fixed) EXPECT_EQ(set, fixed.front());
  spec.regeneration = ActionSetSpec::Regeneration::kFreshEachRound;
  const auto fresh = generate_action_sets(spec, 2, 5, eng);
  EXPECT_NE(fresh[0], fresh[1]);
}

TEST(RewardNoise, ZeroScaleIsSilent) {
  Engine eng(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_noise(0.0, eng), 0.0);
}

TEST(RewardNoise, MomentsMatchScale) {
  Engine eng(10);
  const int n = 100000;
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = sample_noise(0.1, eng);
    s += e;
    s2 += e * e;
  }
  const double mean = s / n;
  EXPECT_LE(std::abs(mean), 3.0 * 0.1 / std::sqrt(n));
  EXPECT_NEAR(s2 / n - mean * mean, 0.01, 0.001);
}

TEST(Diagnostics, ZeroVarianceEnvironments) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 0.0);
  Engine eng(11);
  const auto rep = assumption_diagnostics(m, 1000, eng);
  for (const auto& e : rep.environments) {
    EXPECT_EQ(e.variance_about_mean, 0.0);
    EXPECT_EQ(e.ratio, 0.0);
  }
}

TEST(Diagnostics, TwoGaussianSetup) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0);
  Engine eng(12);
  const auto rep = assumption_diagnostics(m, 10000, eng);
  EXPECT_NEAR(rep.gamma, 2.8284271247461903, 1e-12);
  for (const auto& e : rep.environments) {
    EXPECT_NEAR(e.variance_about_mean, 1.0, 0.05);
    EXPECT_TRUE(e.below_gamma);
  }
}

TEST(Diagnostics, SymmetricMixtureHasCenteredMean) {
  auto m = two_gaussians(vec({2, 2}), vec({-2, -2}), 1.0);
  Engine eng(13);
  const auto rep = assumption_diagnostics(m, 10000, eng);
  EXPECT_LT(rep.mixture_mean.norm(), 1e-12);
  // Pooled variance 1 + p1 p2 gamma^2 = 9 for this mixture.
  EXPECT_NEAR(rep.pooled_variance, 9.0, 0.3);
}

TEST(Diagnostics, RejectsTooFewSamples) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0);
  Engine eng(14);
  EXPECT_THROW(assumption_diagnostics(m, 999, eng), ConfigError);
}

TEST(TaskInstance, SameSeedsSameInstance) {
  auto m = two_gaussians(vec({1, 1}), vec({3, 3}), 1.0);
  auto build = [&] {
    Engine draw(1), acts(2), noise(3);
    return make_task_instance(sample_task(m, draw), ActionSetSpec{}, 30, 0.1, acts, noise);
  };
  const auto a = build();
  const auto b = build();
  EXPECT_EQ(a.task.theta, b.task.theta);
  EXPECT_EQ(a.action_sets, b.action_sets);
  EXPECT_EQ(a.noise, b.noise);
  EXPECT_EQ(a.horizon(), 30);
}

}  // namespace
}  // namespace meml
