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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "meml/bounds.hpp"
#include "meml/io/config.hpp"
#include "meml/io/scenario.hpp"
#include "meml/meta_sim.hpp"
#include "meml/policies.hpp"
#include "meml/rls.hpp"

namespace {

using meml::Matrix;
using meml::Policy;
using meml::Vector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Tolerances and limits.
constexpr double kEstimatorTol = 1e-12;
constexpr double kInverseTol = 1e-8;
constexpr double kGridTol = 1e-3;
constexpr double kOptimismSlack = 1e-12;
constexpr double kCoverageDelta = 0.1;
constexpr int kOrderingReplications = 50;
constexpr double kPooledBiasNormMax = 0.3;
constexpr double kMisclassificationSeMultiple = 2.0;
constexpr double kSlopeTarget = -0.5;
constexpr double kSlopeTol = 0.15;
constexpr double kBoundLimitMax = 1e-6;
constexpr std::uint64_t kSeed = 20260;

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0,
                double e = 0, double f = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, a, b, c, d, e, f);
  return buf;
}

Vector gaussian_vector(int d, std::mt19937_64& eng) {
  std::normal_distribution<double> n01;
  Vector v(d);
  for (int k = 0; k < d; ++k) v[k] = n01(eng);
  return v;
}

Vector unit_vector(int d, std::mt19937_64& eng) {
  Vector v = gaussian_vector(d, eng);
  return v / v.norm();
}

Outcome estimator_equivalence() {
  std::mt19937_64 eng(kSeed + 1);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_int_distribution<int> len(1, 200);
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  for (int seq = 0; seq < 1000; ++seq) {
    const int d = dim(eng);
    meml::OnlineRls rls(d, lam(eng));
    const Vector zero = Vector::Zero(d);
    const int steps = len(eng);
    for (int t = 0; t < steps; ++t) {
      rls.update(gaussian_vector(d, eng), n01(eng));
      worst = std::max(worst, (rls.biased_estimate(zero) - rls.estimate()).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= kEstimatorTol, fmt("max |diff| %.3g over 1000 sequences (tol %.0e)", worst,
                                      kEstimatorTol)};
}

Outcome inverse_consistency() {
  std::mt19937_64 eng(kSeed + 2);
  std::normal_distribution<double> n01;
  const int d = 8;
  meml::OnlineRls rls(d, 1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    rls.update(unit_vector(d, eng), n01(eng));
    const Matrix direct = rls.regularized_gram().llt().solve(Matrix::Identity(d, d));
    worst = std::max(worst, (rls.gram_reg_inverse() - direct).cwiseAbs().maxCoeff());
  }
  return {worst <= kInverseTol,
          fmt("max |diff| %.3g over 10000 updates, d=8 (tol %.0e)", worst, kInverseTol)};
}

Outcome ellipsoid_optimism() {
  std::mt19937_64 eng(kSeed + 3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int violations = 0;
  double worst_grid = 0.0;
  for (int e = 0; e < 100; ++e) {
    const Matrix a = Matrix::NullaryExpr(2, 2, [&] { return 2.0 * u01(eng) - 1.0; });
    const Matrix shape = a.transpose() * a + 0.1 * Matrix::Identity(2, 2);
    const meml::ConfidenceEllipsoid ell{gaussian_vector(2, eng), shape, 0.1 + 2.9 * u01(eng)};
    const Matrix shape_inv = shape.inverse();
    const Matrix l_inv_t = shape.llt().matrixL().transpose().solve(Matrix::Identity(2, 2));
    const Vector x = gaussian_vector(2, eng);
    const double ucb = meml::ellipsoid_ucb(x, ell, shape_inv);
    for (int s = 0; s < 1000; ++s) {
      const Vector v = ell.center + ell.radius * std::sqrt(u01(eng)) * (l_inv_t * unit_vector(2, eng));
      if (x.dot(v) > ucb + kOptimismSlack) ++violations;
    }
    double grid = -1e300;
    for (int k = 0; k < 10000; ++k) {
      const double angle = 2.0 * M_PI * k / 10000.0;
      Vector u(2);
      u << std::cos(angle), std::sin(angle);
      grid = std::max(grid, x.dot(ell.center + ell.radius * (l_inv_t * u)));
    }
    worst_grid = std::max(worst_grid, std::abs(grid - ucb));
  }
  return {violations == 0 && worst_grid <= kGridTol,
          fmt("%.0f interior samples above the UCB; max |UCB - grid max| %.3g (tol %.0e)",
              violations, worst_grid, kGridTol)};
}

Outcome confidence_coverage() {
  const int d = 2;
  const int horizon = 100;
  const int tasks = 1000;
  const double S = 1.0;
  const meml::ConfidenceParams params{d, 1.0, 1.0, 0.1, kCoverageDelta};
  std::mt19937_64 eng(kSeed + 4);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, params.noise_R);
  meml::ActionSetSpec spec;
  int escaped = 0;
  for (int task = 0; task < tasks; ++task) {
    const Vector theta = S * std::sqrt(u01(eng)) * unit_vector(d, eng);
    meml::OnlineRls rls(d, params.lambda, params.action_norm_bound);
    bool left = false;
    for (int t = 0; t <= horizon && !left; ++t) {
      const meml::ConfidenceEllipsoid ell{rls.estimate(), rls.regularized_gram(),
                                          meml::oful_radius(t, params, S)};
      left = !ell.contains(theta);
      if (t == horizon) break;
      const auto arms = meml::generate_action_set(spec, d, eng);
      const auto choice = meml::oful_select_action(rls, Vector::Zero(d), S, arms, t, params);
      rls.update(choice.action, choice.action.dot(theta) + noise(eng));
    }
    escaped += left;
  }
  const double rate = static_cast<double>(escaped) / tasks;
  const double limit =
      kCoverageDelta + 2.0 * std::sqrt(kCoverageDelta * (1.0 - kCoverageDelta) / tasks);
  return {rate <= limit, fmt("escape fraction %.4f over 1000 tasks (limit %.4f)", rate, limit)};
}

struct Paired {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double se_diff = 0.0;
};

// Replication-level comparison of final transfer regret (b - a).
Paired compare(const meml::io::ScenarioResult& r, Policy a, Policy b) {
  const auto va = meml::io::replication_final_regret(r, a);
  const auto vb = meml::io::replication_final_regret(r, b);
  const double n = static_cast<double>(va.size());
  Paired p;
  std::vector<double> diff(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    p.mean_a += va[i] / n;
    p.mean_b += vb[i] / n;
    diff[i] = vb[i] - va[i];
  }
  const double md = p.mean_b - p.mean_a;
  double ss = 0.0;
  for (double x : diff) ss += (x - md) * (x - md);
  p.se_diff = std::sqrt(ss / (n - 1.0) / n);
  return p;
}

bool strictly_below(const Paired& p) { return p.mean_b - p.mean_a > p.se_diff; }

meml::io::ScenarioResult run_preset(const std::string& name, int replications) {
  auto config = meml::io::load_preset(name);
  config.n_replications = replications;
  return meml::io::simulate_scenario(config);
}

Outcome three_way_ordering(const std::string& preset) {
  const auto r = run_preset(preset, kOrderingReplications);
  const Paired lower = compare(r, Policy::kOracle, Policy::kMemlOful);
  const Paired upper = compare(r, Policy::kMemlOful, Policy::kItl);
  const bool pass = strictly_below(lower) && strictly_below(upper);
  return {pass, fmt("Oracle %.3f, MEML-OFUL %.3f, ITL %.3f; gaps %.3f (se %.3f), ", lower.mean_a,
                    lower.mean_b, upper.mean_b, lower.mean_b - lower.mean_a, lower.se_diff) +
                    fmt("%.3f (se %.3f); %.0f replications, T0=%.0f", upper.mean_b - upper.mean_a,
                        upper.se_diff, kOrderingReplications,
                        r.resolved.meml.exploration_rounds)};
}

Outcome pooled_baselines_ordering() {
  const auto r = run_preset("fig-right", kOrderingReplications);
  const Paired avg = compare(r, Policy::kMemlOful, Policy::kAvgOful);
  const Paired rr = compare(r, Policy::kMemlOful, Policy::kRrOful);
  const bool pass = strictly_below(avg) && strictly_below(rr);
  return {pass, fmt("MEML-OFUL %.3f, AVG-OFUL %.3f (gap %.3f, se %.3f), RR-OFUL %.3f (gap %.3f,",
                    avg.mean_a, avg.mean_b, avg.mean_b - avg.mean_a, avg.se_diff, rr.mean_b,
                    rr.mean_b - rr.mean_a) +
                    fmt(" se %.3f); %.0f replications", rr.se_diff, kOrderingReplications)};
}

Outcome centered_mixture() {
  auto config = meml::io::load_preset("fig-right");
  config.name = "centered-mixture";
  config.mixture.environments[0].mean = (Vector(2) << 2, 2).finished();
  config.mixture.environments[1].mean = (Vector(2) << -2, -2).finished();
  config.policies = {Policy::kMemlOful, Policy::kAvgOful};
  config.training_counts = {100, 100};
  config.n_replications = kOrderingReplications;
  const auto r = meml::io::simulate_scenario(config);
  double norm = 0.0;
  for (const auto& b : r.baselines) norm += b.pooled_bias->norm() / r.baselines.size();
  const Paired avg = compare(r, Policy::kMemlOful, Policy::kAvgOful);
  const bool pass = norm <= kPooledBiasNormMax && strictly_below(avg);
  return {pass, fmt("mean pooled bias norm %.3f (max %.1f) at N=200; MEML-OFUL %.3f vs AVG-OFUL "
                    "%.3f, gap %.3f (se %.3f)",
                    norm, kPooledBiasNormMax, avg.mean_a, avg.mean_b, avg.mean_b - avg.mean_a,
                    avg.se_diff) +
                    fmt("; T0=%.0f", r.resolved.meml.exploration_rounds)};
}

bool non_increasing(const std::vector<meml::MisclassificationRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double se = std::hypot(rows[i - 1].standard_error, rows[i].standard_error);
    if (rows[i].rate > rows[i - 1].rate + kMisclassificationSeMultiple * se) return false;
  }
  return true;
}

std::vector<meml::MisclassificationRow> study(double gamma, const std::vector<int>& grid) {
  auto config = meml::io::load_preset("fig-left");
  config.name = "misclassification";
  const Vector mu1 = config.mixture.environments[0].mean;
  config.mixture.environments[1].mean = mu1 + gamma * Vector::Ones(2) / std::sqrt(2.0);
  return meml::io::t0_study(config, grid, 500);
}

Outcome misclassification_monotone() {
  const auto by_t0 = study(2.0 * std::sqrt(2.0), {1, 5, 20});
  std::vector<meml::MisclassificationRow> by_gamma;
  for (double g : {1.0, 2.0 * std::sqrt(2.0), 8.0}) by_gamma.push_back(study(g, {5}).front());
  const bool pass = non_increasing(by_t0) && non_increasing(by_gamma);
  return {pass, fmt("T0 1/5/20: %.3f %.3f %.3f; gamma 1/2.83/8 at T0=5: %.3f %.3f %.3f",
                    by_t0[0].rate, by_t0[1].rate, by_t0[2].rate, by_gamma[0].rate,
                    by_gamma[1].rate, by_gamma[2].rate)};
}

Outcome bias_consistency() {
  auto config = meml::io::load_preset("fig-left");
  config.noise_R = 0.0;
  config.horizon = 400;
  const auto resolved = meml::io::resolve_scenario(config);
  const std::vector<int> sizes = {5, 10, 20, 40, 80};
  const int seeds = 40;
  std::vector<double> log_n;
  std::vector<double> log_err;
  std::string values;
  for (int n : sizes) {
    double err = 0.0;
    for (int s = 0; s < seeds; ++s) {
      meml::SimContext ctx;
      ctx.root_seed = kSeed + 10;
      ctx.scenario = meml::hash_name("bias-consistency");
      ctx.replication = static_cast<std::uint64_t>(s);
      const auto training = meml::run_training_phase(config.mixture, config.actions, {n, n},
                                                      resolved.bandit, ctx);
      const auto biases = meml::build_bias_set(training);
      for (int e = 0; e < 2; ++e) {
        err += (biases.biases[e] - config.mixture.environments[e].mean).norm() / (2.0 * seeds);
      }
    }
    log_n.push_back(std::log(n));
    log_err.push_back(std::log(err));
    values += fmt(" %.4f", err);
  }
  const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / log_n.size();
  const double my = std::accumulate(log_err.begin(), log_err.end(), 0.0) / log_err.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxy += (log_n[i] - mx) * (log_err[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - kSlopeTarget) <= kSlopeTol,
          fmt("log-log slope %.3f (target %.2f +/- %.2f); mean error at N=5..80:", slope,
              kSlopeTarget, kSlopeTol) +
              values};
}

Outcome bound_evaluators() {
  const auto config = meml::io::load_preset("fig-left");
  const auto resolved = meml::io::resolve_scenario(config);
  const int d = config.dim;
  const double L = config.actions.norm_bound;

  double previous = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (double lambda = 1.0; lambda <= 1e12; lambda *= 10.0) {
    const double v = meml::biased_oful_regret_bound(config.horizon, d, lambda, L, config.noise_R, 0.0);
    decreasing = decreasing && v < previous;
    previous = v;
  }
  const double at_limit = previous;

  const int horizon = 10000;
  const int t0 = resolved.meml.exploration_rounds;
  std::vector<double> variances;
  double mean_variance = 0.0;
  for (std::size_t i = 0; i < config.mixture.environments.size(); ++i) {
    const auto& env = config.mixture.environments[i];
    const double var = d * std::pow(env.entry_noise.scale(), 2);
    variances.push_back(var);
    mean_variance += config.mixture.probabilities[i] * var;
  }
  const Vector mix = config.mixture.mixture_mean();
  double pooled = mean_variance;
  for (std::size_t i = 0; i < config.mixture.environments.size(); ++i) {
    pooled += config.mixture.probabilities[i] *
              (config.mixture.environments[i].mean - mix).squaredNorm();
  }
  const double per_env = meml::per_environment_transfer_bound(horizon, t0, d, L,
                                                              config.mixture.probabilities,
                                                              variances);
  const double single = meml::single_environment_transfer_bound(horizon, d, L, pooled);
  const double within = meml::single_environment_transfer_bound(horizon, d, L, mean_variance);

  const bool pass = decreasing && at_limit < kBoundLimitMax && per_env <= single;
  return {pass,
          fmt("single-task bound at lambda=1e12 with h=theta: %.3g (max %.0e), decreasing: %.0f; ",
              at_limit, kBoundLimitMax, decreasing) +
              fmt("T=1e4, T0=%.0f: per-environment %.2f vs pooled-mixture %.2f (variance %.2f; "
                  "within-environment average variance %.2f gives %.2f)",
                  t0, per_env, single, pooled, mean_variance, within)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "meml_acceptance_determinism";
  int mismatches = 0;
  int compared = 0;
  for (const auto& name : meml::io::preset_names()) {
    std::vector<fs::path> dirs = {base / (name + "-a"), base / (name + "-b")};
    for (const auto& dir : dirs) {
      auto config = meml::io::load_preset(name);
      config.root_seed = 7;
      const auto result = meml::io::simulate_scenario(config);
      meml::io::write_artifacts(config, result, dir.string(), 0.0);
    }
    for (const char* f : {"regret.csv", "transfer_regret.csv", "bounds.csv", "regret_curves.svg"}) {
      ++compared;
      const std::string a = slurp(dirs[0] / f);
      if (a.empty() || a != slurp(dirs[1] / f)) ++mismatches;
    }
  }
  fs::remove_all(base);
  return {mismatches == 0,
          fmt("%.0f of %.0f CSV/SVG files differ across repeated seeded runs of every preset",
              mismatches, compared)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "estimator equivalence", 5, estimator_equivalence},
      {2, "inverse consistency", 5, inverse_consistency},
      {3, "ellipsoid optimism", 10, ellipsoid_optimism},
      {4, "confidence coverage", 60, confidence_coverage},
      {5, "ordering lambda=1", 180, [] { return three_way_ordering("fig-left"); }},
      {6, "ordering lambda=200", 180, [] { return three_way_ordering("fig-middle"); }},
      {7, "pooled baselines ordering", 180, pooled_baselines_ordering},
      {8, "zero-mean mixture", 180, centered_mixture},
      {9, "misclassification monotonicity", 120, misclassification_monotone},
      {10, "bias consistency", 120, bias_consistency},
      {11, "bound evaluators", 1, bound_evaluators},
      {12, "determinism", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d %s  %s: %s [%.2fs, limit %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL",
                c.name, out.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
