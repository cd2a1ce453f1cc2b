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
#include <optional>
#include <string>
#include <vector>

#include "meml/bounds.hpp"
#include "meml/environments.hpp"
#include "meml/policies.hpp"

namespace meml::io {

// How the constant bias-distance bound is chosen.
struct BiasBoundSpec {
  enum class Kind { kTwiceParamBound, kDeviationRadius, kValue };
  Kind kind = Kind::kTwiceParamBound;
  double value = 0.0;
};

// Scenario file contents after validation and defaulting. Optional fields
// left empty mean "auto" and are resolved by resolve_scenario().
struct ScenarioConfig {
  std::string name = "scenario";
  int dim = 0;
  int horizon = 0;
  std::optional<int> exploration_rounds;  // empty = auto
  std::optional<int> exploration_fallback;  // empty = d
  double lambda = 1.0;
  std::optional<double> delta;  // empty = 1/T
  double noise_R = 0.1;
  std::optional<double> param_bound;  // empty = max ||mu|| + 4 scale sqrt(d)
  MixtureSpec mixture;
  ActionSetSpec actions;
  std::vector<Policy> policies;
  std::vector<int> training_counts;
  int n_test_tasks = 10;
  int n_replications = 20;
  std::uint64_t root_seed = 0;
  BiasOracleConfig::Mode bias_mode = BiasOracleConfig::Mode::kConstantUpperBound;
  BiasBoundSpec bias_bound;
  bool update_bias_after_task = false;
  std::string output_dir = "out";
  // One line per default that was applied, echoed into run metadata.
  std::vector<std::string> defaults_applied;
};

// Throws ConfigError with "<source>:<line>: <key path>: <message>".
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& source = "<string>");

const std::vector<std::string>& preset_names();
// Raw preset file text; throws ConfigError for an unknown name.
const std::string& preset_text(const std::string& name);
ScenarioConfig load_preset(const std::string& name);

// Concrete parameters derived from a config.
struct ResolvedScenario {
  BanditParams bandit;
  MemlConfig meml;
  T0Result t0;              // result of the exploration-length rule
  bool t0_fallback = false;  // true when the rule was infeasible or not asked for
  std::vector<std::string> warnings;
};

// Throws ConfigError on invariants that need resolved values (T0 < T,
// bias bound <= 2S, distinct environment means).
ResolvedScenario resolve_scenario(const ScenarioConfig& config);

}  // namespace meml::io
