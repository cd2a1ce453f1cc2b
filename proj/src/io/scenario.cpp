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

#include "meml/io/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "meml/errors.hpp"
#include "meml/io/csv.hpp"
#include "meml/io/svg.hpp"

namespace meml::io {

namespace {

constexpr std::int64_t kDiagnosticSamples = 10000;

SimContext context_for(const ScenarioConfig& c, int replication) {
  SimContext ctx;
  ctx.root_seed = c.root_seed;
  ctx.scenario = hash_name(c.name);
  ctx.replication = static_cast<std::uint64_t>(replication);
  return ctx;
}

Engine diagnostics_engine(const ScenarioConfig& c) {
  StreamKey key;
  key.scenario = hash_name(c.name);
  key.phase = Phase::kDiagnostics;
  return make_engine(c.root_seed, key);
}

std::vector<Vector> true_means(const MixtureSpec& mixture) {
  std::vector<Vector> means;
  for (const auto& env : mixture.environments) means.push_back(env.mean);
  return means;
}

bool uses(const ScenarioConfig& c, Policy p) {
  return std::find(c.policies.begin(), c.policies.end(), p) != c.policies.end();
}

}  // namespace

ScenarioResult simulate_scenario(const ScenarioConfig& config) {
  ScenarioResult result;
  result.resolved = resolve_scenario(config);
  const BanditParams& params = result.resolved.bandit;

  TrainingRecords first_training;
  for (int r = 0; r < config.n_replications; ++r) {
    const SimContext ctx = context_for(config, r);
    TrainingRecords training =
        run_training_phase(config.mixture, config.actions, config.training_counts, params, ctx);

    TransferSetup setup;
    setup.policies = config.policies;
    setup.meml = result.resolved.meml;
    setup.n_test_tasks = config.n_test_tasks;
    setup.bias_set = build_bias_set(training);
    setup.baselines.true_means = true_means(config.mixture);
    setup.baselines.bias_oracle = result.resolved.meml.bias_oracle;
    setup.baselines.pooled_bias = pooled_bias(training).biases.front();
    setup.baselines.round_robin_bias = round_robin_bias(training).biases.front();

    result.bias_sets.push_back(setup.bias_set);
    result.baselines.push_back(setup.baselines);
    result.replications.push_back(run_transfer_tasks(config.mixture, config.actions, setup, ctx));
    if (r == 0) first_training = std::move(training);
  }
  result.estimate = aggregate_transfer(result.replications);

  Engine engine = diagnostics_engine(config);
  result.diagnostics = assumption_diagnostics(config.mixture, kDiagnosticSamples, engine);

  BoundInputs in;
  in.horizon = params.horizon;
  in.dim = config.dim;
  in.lambda = params.lambda;
  in.delta = params.delta;
  in.noise_R = params.noise_R;
  in.action_norm_bound = params.action_norm_bound;
  in.param_bound = params.param_bound;
  in.t0 = result.resolved.meml.exploration_rounds;
  in.probabilities = config.mixture.probabilities;
  double mean_variance = 0.0;
  for (std::size_t i = 0; i < result.diagnostics.environments.size(); ++i) {
    const auto& env = result.diagnostics.environments[i];
    in.variances.push_back(env.variance_about_mean);
    in.second_moments.push_back(env.second_moment);
    mean_variance += in.probabilities[i] * env.variance_about_mean;
  }
  in.pooled_variance = result.diagnostics.pooled_variance;
  in.bias_distance = std::sqrt(mean_variance);
  in.gamma = result.diagnostics.gamma;
  in.K = config.mixture.max_sub_gaussian_K();
  in.training_counts = config.training_counts;
  in.training_widths = training_widths(first_training, params);
  result.bounds = evaluate_bounds(in);
  return result;
}

std::vector<double> replication_final_regret(const ScenarioResult& result, Policy policy) {
  std::vector<double> out;
  for (const auto& rep : result.replications) {
    const auto it = std::find(rep.policies.begin(), rep.policies.end(), policy);
    if (it == rep.policies.end()) {
      throw std::out_of_range("policy " + policy_key(policy) + " was not evaluated");
    }
    const auto& tasks = rep.runs[it - rep.policies.begin()];
    double sum = 0.0;
    for (const auto& t : tasks) sum += t.trace.final_regret();
    out.push_back(sum / static_cast<double>(tasks.size()));
  }
  return out;
}

std::string metadata_json(const ScenarioConfig& c, const ScenarioResult& result,
                          double elapsed_seconds) {
  using nlohmann::ordered_json;
  const ResolvedScenario& res = result.resolved;

  ordered_json env_list = ordered_json::array();
  for (std::size_t i = 0; i < c.mixture.environments.size(); ++i) {
    const auto& env = c.mixture.environments[i];
    ordered_json e;
    e["mean"] = std::vector<double>(env.mean.data(), env.mean.data() + env.mean.size());
    e["family"] = to_string(env.entry_noise.family);
    e["sigma"] = env.entry_noise.sigma;
    e["radius"] = env.entry_noise.radius;
    e["halfwidth"] = env.entry_noise.halfwidth;
    e["sub_gaussian_K"] = env.sub_gaussian_K;
    e["probability"] = c.mixture.probabilities[i];
    env_list.push_back(e);
  }
  std::vector<std::string> policies;
  for (Policy p : c.policies) policies.push_back(policy_key(p));

  ordered_json meta;
  meta["software"] = {{"name", "meml"}, {"version", kSoftwareVersion}};
  meta["scenario"] = c.name;
  meta["config"] = {
      {"dimension", c.dim},
      {"horizon", c.horizon},
      {"exploration_rounds",
       c.exploration_rounds ? ordered_json(*c.exploration_rounds) : ordered_json("auto")},
      {"lambda", c.lambda},
      {"delta", c.delta ? ordered_json(*c.delta) : ordered_json("1/T")},
      {"noise_R", c.noise_R},
      {"param_bound_S", c.param_bound ? ordered_json(*c.param_bound) : ordered_json("auto")},
      {"action_norm_L", c.actions.norm_bound},
      {"arms_per_round", c.actions.arms_per_round},
      {"regeneration", c.actions.regeneration == ActionSetSpec::Regeneration::kFreshEachRound
                           ? "fresh"
                           : "fixed"},
      {"environments", env_list},
      {"policies", policies},
      {"training_tasks", c.training_counts},
      {"n_test_tasks", c.n_test_tasks},
      {"n_replications", c.n_replications},
      {"root_seed", c.root_seed},
      {"update_bias_after_task", c.update_bias_after_task},
      {"output_dir", c.output_dir},
      {"defaults_applied", c.defaults_applied},
  };

  ordered_json t0;
  t0["resolved"] = res.meml.exploration_rounds;
  t0["from_rule"] = !res.t0_fallback;
  t0["rule_feasible"] = res.t0.feasible();
  t0["rule_value"] = res.t0.feasible() ? ordered_json(*res.t0.rounds) : ordered_json("infeasible");
  t0["rule_reason"] = res.t0.reason;
  t0["delta_admissible_lower"] = res.t0.delta_lower;
  t0["delta_admissible"] = res.t0.delta_admissible;
  meta["resolved"] = {
      {"T0", t0},
      {"delta", res.bandit.delta},
      {"param_bound_S", res.bandit.param_bound},
      {"bias_distance_mode", to_string(res.meml.bias_oracle.mode)},
      {"bias_distance_bound", res.meml.bias_oracle.constant_bound},
      {"gamma", result.diagnostics.gamma},
      {"warnings", res.warnings},
  };
  meta["bounds"] = {
      {"constant_policy", result.bounds.constant_policy},
      {"note", "bound curves are shape up to universal constants"},
      {"tau_bound", result.bounds.tau_bound},
      {"n_condition_satisfied", result.bounds.n_condition_satisfied},
  };

  ordered_json diag_envs = ordered_json::array();
  for (const auto& e : result.diagnostics.environments) {
    diag_envs.push_back({{"variance_about_mean", e.variance_about_mean},
                         {"second_moment", e.second_moment},
                         {"ratio", e.ratio},
                         {"variance_below_gamma", e.below_gamma}});
  }
  meta["diagnostics"] = {{"n_samples", result.diagnostics.n_samples},
                         {"environments", diag_envs},
                         {"pooled_variance", result.diagnostics.pooled_variance},
                         {"pooled_second_moment", result.diagnostics.pooled_second_moment}};

  meta["rng_streams"] = {
      {"engine", "mt19937_64"},
      {"seed_derivation",
       "splitmix64 chain over (root_seed, scenario hash, replication, phase, environment, "
       "task, purpose, policy)"},
      {"phases", {"test", "training", "diagnostics"}},
      {"purposes", {"task-draw", "actions", "noise", "exploration-choice"}},
      {"coupling", "test task i uses policy-independent task-draw/actions/noise streams; "
                   "only exploration-choice is keyed by policy"},
  };

  ordered_json flags;
  flags["action_sets"] = "uniform on the sphere of radius L (stand-in for the unspecified decision sets)";
  std::vector<std::string> families;
  for (const auto& env : c.mixture.environments) {
    families.push_back(std::string(to_string(env.entry_noise.family)) +
                       (env.entry_noise.family == EntryNoise::Family::kGaussian
                            ? " (unbounded support)"
                            : " (bounded support)"));
  }
  flags["task_support"] = families;
  flags["bias_distance"] = res.meml.bias_oracle.mode == BiasOracleConfig::Mode::kTrueParameter
                               ? "true parameter (diagnostic only)"
                               : "constant upper bound";
  flags["exploration_regret_charged"] = true;
  if (uses(c, Policy::kOracle)) flags["oracle_knows_true_label"] = true;
  if (uses(c, Policy::kRrOful)) {
    flags["rr_oful"] = "approximation: pooled estimate from d round-robin prefix rounds per training task";
  }
  if (uses(c, Policy::kAvgOful)) flags["avg_oful"] = "pooled mean of all training estimates";
  flags["training_policy"] = "plain OFUL (bias 0)";
  meta["approximations"] = flags;

  std::size_t misclassified = 0;
  std::size_t classified = 0;
  for (const auto& rep : result.replications) {
    for (std::size_t p = 0; p < rep.policies.size(); ++p) {
      if (rep.policies[p] != Policy::kMemlOful) continue;
      for (const auto& t : rep.runs[p]) {
        ++classified;
        misclassified += t.chosen_environment && *t.chosen_environment != t.true_environment;
      }
    }
  }
  if (classified > 0) {
    meta["meml_misclassification_rate"] = static_cast<double>(misclassified) / classified;
  }

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  meta["wall_clock"] = {{"finished_utc", stamp.str()}, {"elapsed_seconds", elapsed_seconds}};
  return meta.dump(2) + "\n";
}

void write_artifacts(const ScenarioConfig& config, const ScenarioResult& result,
                     const std::string& out_dir, double elapsed_seconds) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw RuntimeError("cannot create output directory " + out_dir + ": " + ec.message());

  auto open = [&](const char* name) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeError("cannot write " + path.string());
    out.imbue(std::locale::classic());
    return out;
  };
  auto close = [&](std::ofstream& out, const char* name) {
    out.close();
    if (!out) throw RuntimeError(std::string("failed writing ") + name);
  };

  {
    auto out = open("regret.csv");
    write_regret_csv(out, config.name, result.replications);
    close(out, "regret.csv");
  }
  {
    auto out = open("transfer_regret.csv");
    write_transfer_csv(out, config.name, result.estimate);
    close(out, "transfer_regret.csv");
  }
  {
    auto out = open("bounds.csv");
    write_bounds_csv(out, config.name, result.bounds);
    close(out, "bounds.csv");
  }
  {
    auto out = open("metadata.json");
    out << metadata_json(config, result, elapsed_seconds);
    close(out, "metadata.json");
  }
  {
    auto out = open("regret_curves.svg");
    out << render_regret_chart(result.estimate, config.name + ": transfer regret");
    close(out, "regret_curves.svg");
  }
}

ScenarioResult run_scenario(const ScenarioConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result = simulate_scenario(config);
  for (const auto& w : result.resolved.warnings) log << "warning: " << w << "\n";
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_artifacts(config, result, config.output_dir, elapsed);
  return result;
}

void diagnose(const ScenarioConfig& config, std::ostream& out) {
  const MixtureSpec& mix = config.mixture;
  const double gamma = mix.gamma();
  out << std::setprecision(6);
  out << "scenario: " << config.name << "\n";
  out << "environments: " << mix.size() << ", dimension " << config.dim << "\n";
  out << "gamma = " << gamma << "\n";

  if (gamma > 0.0 || mix.size() == 1) {
    Engine engine = diagnostics_engine(config);
    const AssumptionReport rep = assumption_diagnostics(mix, kDiagnosticSamples, engine);
    for (std::size_t i = 0; i < rep.environments.size(); ++i) {
      const auto& e = rep.environments[i];
      out << "environment " << i + 1 << ": Var about mean = " << e.variance_about_mean
          << ", E||theta||^2 = " << e.second_moment << ", ratio = " << e.ratio
          << ", Var < gamma: " << (e.below_gamma ? "yes" : "no") << "\n";
    }
    out << "pooled mixture: mean = [" << rep.mixture_mean.transpose()
        << "], Var about mixture mean = " << rep.pooled_variance
        << ", E||theta||^2 = " << rep.pooled_second_moment << "\n";
  }

  std::vector<int> counts = config.training_counts;
  std::sort(counts.begin(), counts.end());
  const double delta = config.delta.value_or(1.0 / config.horizon);
  out << "K = " << mix.max_sub_gaussian_K() << ", delta = " << delta << "\n";
  if (!(delta > 0.0 && delta < 1.0)) {
    out << "T0 rule: Infeasible (delta must lie in (0, 1))\n";
    return;
  }
  const T0Result t0 = compute_t0(gamma, mix.max_sub_gaussian_K(), config.dim, config.noise_R,
                                 delta, counts.front(),
                                 counts.size() > 1 ? counts[1] : counts.front());
  if (t0.feasible()) {
    out << "T0 rule: " << *t0.rounds << " (raw " << t0.raw << ")\n";
  } else {
    out << "T0 rule: Infeasible (" << t0.reason << ")\n";
  }
  out << "training-count condition: " << (t0.n_condition ? "satisfied" : "violated") << "\n";
  out << "delta admissible interval: (" << t0.delta_lower << ", 1): delta "
      << (t0.delta_admissible ? "inside" : "outside") << "\n";
}

std::vector<MisclassificationRow> t0_study(const ScenarioConfig& config,
                                           const std::vector<int>& grid, int n_tasks) {
  const ResolvedScenario resolved = resolve_scenario(config);
  const SimContext ctx = context_for(config, 0);
  const TrainingRecords training = run_training_phase(config.mixture, config.actions,
                                                      config.training_counts, resolved.bandit, ctx);
  return misclassification_study(config.mixture, build_bias_set(training), grid, n_tasks,
                                 config.actions, resolved.bandit, ctx);
}

}  // namespace meml::io
