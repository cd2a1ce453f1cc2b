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

#include "meml/io/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "meml/errors.hpp"

namespace meml::io {

namespace detail {
const std::map<std::string, std::string>& preset_sources();
}  // namespace detail

namespace {

constexpr double kDefaultTaskVariance = 1.0;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& path,
                         const std::string& message) const {
    std::ostringstream msg;
    msg << source_;
    if (node.IsDefined() && !node.Mark().is_null()) msg << ":" << node.Mark().line + 1;
    msg << ": " << (path.empty() ? "<root>" : path) << ": " << message;
    throw ConfigError(msg.str());
  }

  void check_keys(const YAML::Node& node, const std::string& path,
                  const std::set<std::string>& allowed) const {
    if (!node.IsMap()) fail(node, path, "expected a mapping");
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, join(path, key), "unknown key");
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& path, const char* what) const {
    if (!node.IsScalar()) fail(node, path, std::string("expected ") + what);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, path, std::string("expected ") + what + ", got '" + node.Scalar() + "'");
    }
  }

  double real(const YAML::Node& n, const std::string& p) const {
    const double v = scalar<double>(n, p, "a number");
    if (!std::isfinite(v)) fail(n, p, "expected a finite number");
    return v;
  }
  int integer(const YAML::Node& n, const std::string& p) const {
    return scalar<int>(n, p, "an integer");
  }
  std::string text(const YAML::Node& n, const std::string& p) const {
    return scalar<std::string>(n, p, "a string");
  }
  bool boolean(const YAML::Node& n, const std::string& p) const {
    return scalar<bool>(n, p, "true or false");
  }

  Vector vector(const YAML::Node& n, const std::string& p) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, p, "expected a nonempty list of numbers");
    Vector v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = real(n[i], p + "[" + std::to_string(i) + "]");
    }
    return v;
  }

 private:
  std::string source_;
};

EnvironmentSpec parse_environment(const Reader& r, const YAML::Node& node,
                                  const std::string& path, std::vector<std::string>& defaults) {
  r.check_keys(node, path, {"mean", "noise", "sub_gaussian_K"});
  if (!node["mean"]) r.fail(node, path + ".mean", "missing required key");
  EnvironmentSpec env;
  env.mean = r.vector(node["mean"], path + ".mean");
  const double d = static_cast<double>(env.mean.size());

  const YAML::Node noise = node["noise"];
  if (!noise) {
    env.entry_noise = EntryNoise::gaussian(std::sqrt(kDefaultTaskVariance / d));
    defaults.push_back(path + ".noise = gaussian, variance 1");
  } else {
    const std::string np = path + ".noise";
    r.check_keys(noise, np, {"family", "sigma", "variance", "radius", "halfwidth"});
    const std::string family =
        noise["family"] ? r.text(noise["family"], np + ".family") : std::string("gaussian");
    auto nonneg = [&](const char* key) {
      const double v = r.real(noise[key], np + "." + key);
      if (v < 0.0) r.fail(noise[key], np + "." + key, "must be nonnegative");
      return v;
    };
    if (family == "gaussian" || family == "truncated_gaussian") {
      if (noise["halfwidth"]) r.fail(noise["halfwidth"], np + ".halfwidth", "only valid for uniform_box");
      if (noise["sigma"] && noise["variance"]) {
        r.fail(noise, np, "give either sigma or variance, not both");
      }
      double sigma = std::sqrt(kDefaultTaskVariance / d);
      if (noise["sigma"]) sigma = nonneg("sigma");
      if (noise["variance"]) sigma = std::sqrt(nonneg("variance") / d);
      if (family == "gaussian") {
        if (noise["radius"]) r.fail(noise["radius"], np + ".radius", "only valid for truncated_gaussian");
        env.entry_noise = EntryNoise::gaussian(sigma);
      } else {
        env.entry_noise = EntryNoise::truncated_gaussian(sigma, noise["radius"] ? nonneg("radius") : 0.0);
      }
    } else if (family == "uniform_box") {
      if (noise["sigma"] || noise["radius"]) {
        r.fail(noise, np, "uniform_box takes halfwidth or variance");
      }
      double halfwidth = std::sqrt(3.0 * kDefaultTaskVariance / d);
      if (noise["halfwidth"]) halfwidth = nonneg("halfwidth");
      if (noise["variance"]) halfwidth = std::sqrt(3.0 * nonneg("variance") / d);
      env.entry_noise = EntryNoise::uniform_box(halfwidth);
    } else {
      r.fail(noise["family"], np + ".family",
             "expected gaussian, truncated_gaussian or uniform_box");
    }
  }

  if (node["sub_gaussian_K"]) {
    env.sub_gaussian_K = r.real(node["sub_gaussian_K"], path + ".sub_gaussian_K");
    if (env.sub_gaussian_K < 0.0) r.fail(node["sub_gaussian_K"], path + ".sub_gaussian_K", "must be nonnegative");
  } else {
    env.sub_gaussian_K = env.entry_noise.scale();
  }
  return env;
}

ScenarioConfig parse_root(const Reader& r, const YAML::Node& root) {
  if (!root.IsDefined() || root.IsNull()) r.fail(root, "", "empty configuration");
  r.check_keys(root, "",
               {"scenario", "dimension", "horizon", "exploration_rounds", "exploration_fallback",
                "lambda", "delta", "noise_R", "param_bound_S", "action_norm_L", "mixture",
                "actions", "policies", "training_tasks", "n_test_tasks", "n_replications",
                "root_seed", "bias_oracle", "output_dir", "update_bias_after_task"});

  ScenarioConfig c;
  auto& defaults = c.defaults_applied;
  auto defaulted = [&](const char* key, const std::string& value) {
    if (!root[key]) defaults.push_back(std::string(key) + " = " + value);
    return !root[key];
  };

  if (root["scenario"]) c.name = r.text(root["scenario"], "scenario");
  defaulted("scenario", c.name);

  if (!root["horizon"]) r.fail(root, "horizon", "missing required key");
  c.horizon = r.integer(root["horizon"], "horizon");
  if (c.horizon < 1) r.fail(root["horizon"], "horizon", "must be at least 1");

  // Mixture.
  const YAML::Node mixture = root["mixture"];
  if (!mixture) r.fail(root, "mixture", "missing required key");
  r.check_keys(mixture, "mixture", {"environments", "probabilities"});
  const YAML::Node envs = mixture["environments"];
  if (!envs || !envs.IsSequence() || envs.size() == 0) {
    r.fail(envs ? envs : mixture, "mixture.environments", "expected a nonempty list");
  }
  for (std::size_t i = 0; i < envs.size(); ++i) {
    c.mixture.environments.push_back(parse_environment(
        r, envs[i], "mixture.environments[" + std::to_string(i) + "]", defaults));
  }
  const int m = c.mixture.size();
  const int d = c.mixture.dim();
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (c.mixture.environments[i].mean.size() != d) {
      r.fail(envs[i]["mean"], "mixture.environments[" + std::to_string(i) + "].mean",
             "all means must have the same dimension");
    }
  }
  if (mixture["probabilities"]) {
    const YAML::Node probs = mixture["probabilities"];
    const Vector p = r.vector(probs, "mixture.probabilities");
    if (p.size() != m) r.fail(probs, "mixture.probabilities", "need one probability per environment");
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      if (p[i] < 0.0) r.fail(probs, "mixture.probabilities", "probabilities must be nonnegative");
      total += p[i];
      c.mixture.probabilities.push_back(p[i]);
    }
    if (std::abs(total - 1.0) > 1e-12) {
      r.fail(probs, "mixture.probabilities", "probabilities must sum to 1");
    }
  } else {
    c.mixture.probabilities.assign(m, 1.0 / m);
    defaults.push_back("mixture.probabilities = uniform");
  }

  if (root["dimension"]) {
    c.dim = r.integer(root["dimension"], "dimension");
    if (c.dim != d) r.fail(root["dimension"], "dimension", "does not match the environment means");
  } else {
    c.dim = d;
    defaults.push_back("dimension = " + std::to_string(d) + " (from means)");
  }

  // Exploration length.
  if (root["exploration_rounds"]) {
    const YAML::Node n = root["exploration_rounds"];
    if (n.IsScalar() && n.Scalar() == "auto") {
      c.exploration_rounds.reset();
    } else {
      c.exploration_rounds = r.integer(n, "exploration_rounds");
      if (*c.exploration_rounds < 0) r.fail(n, "exploration_rounds", "must be nonnegative");
      if (*c.exploration_rounds >= c.horizon) {
        r.fail(n, "exploration_rounds", "must be smaller than horizon");
      }
    }
  } else {
    defaults.push_back("exploration_rounds = auto");
  }
  if (root["exploration_fallback"]) {
    c.exploration_fallback = r.integer(root["exploration_fallback"], "exploration_fallback");
    if (*c.exploration_fallback < 0 || *c.exploration_fallback >= c.horizon) {
      r.fail(root["exploration_fallback"], "exploration_fallback", "must satisfy 0 <= value < horizon");
    }
  } else {
    defaults.push_back("exploration_fallback = dimension");
  }

  if (root["lambda"]) {
    c.lambda = r.real(root["lambda"], "lambda");
    if (!(c.lambda > 0.0)) r.fail(root["lambda"], "lambda", "must be positive");
  }
  defaulted("lambda", "1");

  if (root["delta"]) {
    const YAML::Node n = root["delta"];
    if (n.IsScalar() && n.Scalar() == "1/T") {
      c.delta.reset();
    } else {
      c.delta = r.real(n, "delta");
      if (!(*c.delta > 0.0 && *c.delta < 1.0)) r.fail(n, "delta", "must lie in (0, 1)");
    }
  }
  defaulted("delta", "1/T");

  if (root["noise_R"]) {
    c.noise_R = r.real(root["noise_R"], "noise_R");
    if (c.noise_R < 0.0) r.fail(root["noise_R"], "noise_R", "must be nonnegative");
  }
  defaulted("noise_R", "0.1");

  if (root["param_bound_S"]) {
    const YAML::Node n = root["param_bound_S"];
    if (!(n.IsScalar() && n.Scalar() == "auto")) {
      c.param_bound = r.real(n, "param_bound_S");
      if (!(*c.param_bound > 0.0)) r.fail(n, "param_bound_S", "must be positive");
    }
  }
  defaulted("param_bound_S", "auto (max ||mu|| + 4 scale sqrt(d))");

  if (root["action_norm_L"]) {
    c.actions.norm_bound = r.real(root["action_norm_L"], "action_norm_L");
    if (!(c.actions.norm_bound > 0.0)) r.fail(root["action_norm_L"], "action_norm_L", "must be positive");
  }
  defaulted("action_norm_L", "1");

  if (const YAML::Node a = root["actions"]) {
    r.check_keys(a, "actions", {"arms_per_round", "regeneration"});
    if (a["arms_per_round"]) {
      c.actions.arms_per_round = r.integer(a["arms_per_round"], "actions.arms_per_round");
      if (c.actions.arms_per_round < 1) {
        r.fail(a["arms_per_round"], "actions.arms_per_round", "must be at least 1");
      }
    } else {
      defaults.push_back("actions.arms_per_round = 10");
    }
    if (a["regeneration"]) {
      const std::string mode = r.text(a["regeneration"], "actions.regeneration");
      if (mode == "fresh") {
        c.actions.regeneration = ActionSetSpec::Regeneration::kFreshEachRound;
      } else if (mode == "fixed") {
        c.actions.regeneration = ActionSetSpec::Regeneration::kFixedAcrossRounds;
      } else {
        r.fail(a["regeneration"], "actions.regeneration", "expected fresh or fixed");
      }
    }
  } else {
    defaults.push_back("actions = 10 fresh arms per round");
  }

  if (const YAML::Node p = root["policies"]) {
    if (!p.IsSequence() || p.size() == 0) r.fail(p, "policies", "expected a nonempty list");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string path = "policies[" + std::to_string(i) + "]";
      const auto policy = parse_policy(r.text(p[i], path));
      if (!policy) r.fail(p[i], path, "unknown policy '" + p[i].Scalar() + "'");
      for (Policy seen : c.policies) {
        if (seen == *policy) r.fail(p[i], path, "duplicate policy");
      }
      c.policies.push_back(*policy);
    }
  } else {
    c.policies = {Policy::kMemlOful, Policy::kItl, Policy::kOracle};
    defaults.push_back("policies = [meml-oful, itl, oracle]");
  }

  if (const YAML::Node t = root["training_tasks"]) {
    if (t.IsScalar()) {
      c.training_counts.assign(m, r.integer(t, "training_tasks"));
    } else if (t.IsSequence()) {
      if (static_cast<int>(t.size()) != m) {
        r.fail(t, "training_tasks", "need one count per environment");
      }
      for (std::size_t i = 0; i < t.size(); ++i) {
        c.training_counts.push_back(r.integer(t[i], "training_tasks[" + std::to_string(i) + "]"));
      }
    } else {
      r.fail(t, "training_tasks", "expected an integer or a list");
    }
    for (int n : c.training_counts) {
      if (n < 1) r.fail(t, "training_tasks", "every environment needs at least one training task");
    }
  } else {
    c.training_counts.assign(m, 10);
    defaults.push_back("training_tasks = 10 per environment");
  }

  if (root["n_test_tasks"]) {
    c.n_test_tasks = r.integer(root["n_test_tasks"], "n_test_tasks");
    if (c.n_test_tasks < 1) r.fail(root["n_test_tasks"], "n_test_tasks", "must be at least 1");
  }
  defaulted("n_test_tasks", "10");

  if (root["n_replications"]) {
    c.n_replications = r.integer(root["n_replications"], "n_replications");
    if (c.n_replications < 1) r.fail(root["n_replications"], "n_replications", "must be at least 1");
  }
  defaulted("n_replications", "20");

  if (root["root_seed"]) c.root_seed = r.scalar<std::uint64_t>(root["root_seed"], "root_seed", "a nonnegative integer");
  defaulted("root_seed", "0");

  if (const YAML::Node b = root["bias_oracle"]) {
    r.check_keys(b, "bias_oracle", {"mode", "bound"});
    if (b["mode"]) {
      const std::string mode = r.text(b["mode"], "bias_oracle.mode");
      if (mode == "constant") {
        c.bias_mode = BiasOracleConfig::Mode::kConstantUpperBound;
      } else if (mode == "true_parameter") {
        c.bias_mode = BiasOracleConfig::Mode::kTrueParameter;
      } else {
        r.fail(b["mode"], "bias_oracle.mode", "expected constant or true_parameter");
      }
    }
    if (const YAML::Node bound = b["bound"]) {
      if (bound.IsScalar() && bound.Scalar() == "auto") {
        c.bias_bound.kind = BiasBoundSpec::Kind::kTwiceParamBound;
      } else if (bound.IsScalar() && bound.Scalar() == "deviation") {
        c.bias_bound.kind = BiasBoundSpec::Kind::kDeviationRadius;
      } else {
        c.bias_bound.kind = BiasBoundSpec::Kind::kValue;
        c.bias_bound.value = r.real(bound, "bias_oracle.bound");
        if (c.bias_bound.value < 0.0) r.fail(bound, "bias_oracle.bound", "must be nonnegative");
      }
    }
  } else {
    defaults.push_back("bias_oracle = constant, bound 2S");
  }

  if (root["output_dir"]) c.output_dir = r.text(root["output_dir"], "output_dir");
  defaulted("output_dir", c.output_dir);

  if (root["update_bias_after_task"]) {
    c.update_bias_after_task = r.boolean(root["update_bias_after_task"], "update_bias_after_task");
  }
  return c;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
  const Reader reader(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    std::ostringstream msg;
    msg << source << ":" << e.mark.line + 1 << ": parse error: " << e.msg;
    throw ConfigError(msg.str());
  }
  return parse_root(reader, root);
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, text] : detail::preset_sources()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::string& preset_text(const std::string& name) {
  const auto& sources = detail::preset_sources();
  const auto it = sources.find(name);
  if (it == sources.end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

ScenarioConfig load_preset(const std::string& name) {
  return parse_config_text(preset_text(name), "preset:" + name + ".cfg");
}

ResolvedScenario resolve_scenario(const ScenarioConfig& c) {
  ResolvedScenario out;
  c.mixture.validate();

  BanditParams& b = out.bandit;
  b.horizon = c.horizon;
  b.lambda = c.lambda;
  b.delta = c.delta.value_or(1.0 / c.horizon);
  b.noise_R = c.noise_R;
  b.action_norm_bound = c.actions.norm_bound;
  b.param_bound = c.param_bound.value_or(c.mixture.default_param_bound());

  std::vector<int> counts = c.training_counts;
  std::sort(counts.begin(), counts.end());
  const int n1 = counts.front();
  const int n2 = counts.size() > 1 ? counts[1] : counts.front();
  if (b.delta < 1.0) {
    out.t0 = compute_t0(c.mixture.gamma(), c.mixture.max_sub_gaussian_K(), c.dim, c.noise_R,
                        b.delta, n1, n2);
  } else {
    out.t0.reason = "delta must lie in (0, 1) for the exploration-length rule";
  }

  MemlConfig& meml = out.meml;
  meml.bandit = b;
  meml.update_bias_after_task = c.update_bias_after_task;
  const int fallback = c.exploration_fallback.value_or(std::min(c.dim, c.horizon - 1));
  if (c.exploration_rounds) {
    meml.exploration_rounds = *c.exploration_rounds;
    out.t0_fallback = true;
  } else if (out.t0.feasible() && *out.t0.rounds < c.horizon) {
    meml.exploration_rounds = *out.t0.rounds;
  } else {
    meml.exploration_rounds = fallback;
    out.t0_fallback = true;
    out.warnings.push_back(
        "exploration_rounds auto: " +
        (out.t0.feasible() ? std::string("rule gives T0 >= horizon") : out.t0.reason) +
        "; falling back to T0 = " + std::to_string(fallback));
  }

  meml.bias_oracle.mode = c.bias_mode;
  switch (c.bias_bound.kind) {
    case BiasBoundSpec::Kind::kTwiceParamBound:
      meml.bias_oracle.constant_bound = 2.0 * b.param_bound;
      break;
    case BiasBoundSpec::Kind::kDeviationRadius: {
      double scale = 0.0;
      for (const auto& env : c.mixture.environments) scale = std::max(scale, env.entry_noise.scale());
      meml.bias_oracle.constant_bound = 4.0 * scale * std::sqrt(static_cast<double>(c.dim));
      break;
    }
    case BiasBoundSpec::Kind::kValue:
      meml.bias_oracle.constant_bound = c.bias_bound.value;
      break;
  }
  meml.bias_oracle.validate(b.param_bound);
  meml.validate();
  if (c.bias_mode == BiasOracleConfig::Mode::kTrueParameter) {
    out.warnings.push_back("bias_oracle.mode = true_parameter reads the hidden task parameter "
                           "(diagnostic mode)");
  }
  return out;
}

}  // namespace meml::io
