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

// Command-line front end: run, preset, diagnose, t0-study.

#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meml/errors.hpp"
#include "meml/io/config.hpp"
#include "meml/io/scenario.hpp"

namespace {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> replications;
};

void add_run_flags(CLI::App* cmd, RunOverrides& o) {
  cmd->add_option("--seed", o.seed, "Root seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--replications", o.replications, "Independent repeats of the whole experiment")
      ->check(CLI::PositiveNumber);
}

int execute(meml::io::ScenarioConfig config, const RunOverrides& o) {
  if (o.seed) config.root_seed = *o.seed;
  if (o.out) config.output_dir = *o.out;
  if (o.replications) config.n_replications = *o.replications;
  const auto result = meml::io::run_scenario(config, std::cerr);
  std::cout << "scenario " << config.name << ": T0 = " << result.resolved.meml.exploration_rounds
            << ", delta = " << result.resolved.bandit.delta << "\n";
  for (const auto& curve : result.estimate.curves) {
    std::cout << "  " << std::left << std::setw(10) << meml::policy_label(curve.policy)
              << " final transfer regret " << curve.mean.back() << " (std "
              << curve.stddev.back() << ", n " << curve.n << ")\n";
  }
  std::cout << "artifacts written to " << config.output_dir << "\n";
  return 0;
}

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      grid.push_back(v);
    } catch (const std::exception&) {
      throw meml::ConfigError("--grid: expected comma-separated nonnegative integers, got '" +
                              item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-learning linear bandit simulator"};
  app.require_subcommand(1);

  RunOverrides run_opts;
  std::string run_config;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("config", run_config, "Scenario configuration file")->required();
  add_run_flags(run, run_opts);

  RunOverrides preset_opts;
  std::string preset_name;
  bool print_only = false;
  auto* preset = app.add_subcommand("preset", "Run a built-in figure preset");
  preset->add_option("name", preset_name, "Preset name")
      ->required()
      ->check(CLI::IsMember(meml::io::preset_names()));
  preset->add_flag("--print", print_only, "Print the preset configuration and exit");
  add_run_flags(preset, preset_opts);

  std::string diag_config;
  auto* diag = app.add_subcommand("diagnose", "Assumption diagnostics and T0 feasibility");
  diag->add_option("config", diag_config, "Scenario configuration file or preset name")->required();

  std::string study_config;
  int study_tasks = 500;
  std::string study_grid = "1,2,5,10,20";
  auto* study = app.add_subcommand("t0-study", "Misclassification rate versus T0");
  study->add_option("config", study_config, "Scenario configuration file or preset name")
      ->required();
  study->add_option("--tasks", study_tasks, "Test tasks per grid point")->check(CLI::PositiveNumber);
  study->add_option("--grid", study_grid, "Comma-separated T0 values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto load = [](const std::string& arg) {
    for (const auto& name : meml::io::preset_names()) {
      if (arg == name) return meml::io::load_preset(name);
    }
    return meml::io::parse_config(arg);
  };

  try {
    if (*run) return execute(meml::io::parse_config(run_config), run_opts);
    if (*preset) {
      if (print_only) {
        std::cout << meml::io::preset_text(preset_name);
        return 0;
      }
      return execute(meml::io::load_preset(preset_name), preset_opts);
    }
    if (*diag) {
      meml::io::diagnose(load(diag_config), std::cout);
      return 0;
    }
    if (*study) {
      const auto config = load(study_config);
      const auto rows = meml::io::t0_study(config, parse_grid(study_grid), study_tasks);
      std::cout << "T0,n_tasks,errors,rate,standard_error\n";
      for (const auto& row : rows) {
        std::cout << row.exploration_rounds << "," << row.n_tasks << "," << row.errors << ","
                  << row.rate << "," << row.standard_error << "\n";
      }
      return 0;
    }
  } catch (const meml::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
