// Copyright 2026 The cmtlab Authors
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

// cmtlab command-line front end.
//
//   cmtlab run --config <path> [--seed S] [--out <path>] [--set key=value ...]
//   cmtlab run --preset <name> [...]
//   cmtlab presets
//   cmtlab check
//   cmtlab schema
//
// Exit codes: 0 success, 1 runtime error, 2 config validation failure,
// 3 solver non-convergence.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmtlab/experiments.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cmt::Error(cmt::ErrorCode::kInvalidConfig, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunArgs {
  std::string config_path;
  std::string preset;
  std::string out;
  std::vector<std::string> sets;
  long long seed = -1;
  int threads = -1;
  int n_states = -1;
  int steps = -1;
};

int do_run(const RunArgs& args) {
  std::string text;
  std::vector<std::string> overrides;
  if (!args.preset.empty()) {
    const cmt::Preset& p = cmt::find_preset(args.preset);
    text = p.config_json;
    overrides.push_back("provenance=" + p.provenance);
  } else {
    text = read_file(args.config_path);
  }
  overrides.insert(overrides.end(), args.sets.begin(), args.sets.end());
  if (args.seed >= 0) overrides.push_back("seed=" + std::to_string(args.seed));
  if (args.threads >= 0) overrides.push_back("threads=" + std::to_string(args.threads));
  if (args.n_states >= 0) overrides.push_back("n_states=" + std::to_string(args.n_states));
  if (args.steps >= 0) overrides.push_back("steps=" + std::to_string(args.steps));

  cmt::ExperimentConfig cfg = cmt::parse_config(text, overrides);
  if (!args.out.empty()) cfg.output_path = args.out;
  const cmt::RunResult result = cmt::run_experiment(cfg);

  if (cfg.output_path.empty() || cfg.output_path == "-") {
    cmt::write_csv(result.table, std::cout);
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output '" << cfg.output_path << "'\n";
      return kExitRuntime;
    }
    cmt::write_csv(result.table, out);
  }
  if (result.nonconverged > 0) {
    std::cerr << "error: " << result.nonconverged << " positivity solves did not reach the KKT tolerance\n";
    return kExitNonConvergence;
  }
  return 0;
}

int do_presets() {
  for (const auto& p : cmt::list_presets()) std::cout << p.name << "\t" << p.provenance << "\n";
  return 0;
}

int do_check() {
  int failed = 0;
  for (const auto& c : cmt::run_invariant_checks()) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (!c.passed) ++failed;
  }
  return failed == 0 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tomography, operator spreading and quantum chaos experiments"};
  app.set_version_flag("--version", std::string(cmt::tool_version()));
  app.require_subcommand(1);

  RunArgs args;
  CLI::App* run = app.add_subcommand("run", "Run an experiment and write a CSV table");
  auto* config_opt = run->add_option("--config", args.config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* preset_opt = run->add_option("--preset", args.preset, "Named preset instead of a config file");
  config_opt->excludes(preset_opt);
  run->add_option("--seed", args.seed, "Override the config seed")->check(CLI::NonNegativeNumber);
  run->add_option("--out", args.out, "CSV output path ('-' for stdout)");
  run->add_option("--set", args.sets, "Override a config key, e.g. --set model.lambda=7");
  run->add_option("--threads", args.threads, "Worker threads (0 = hardware concurrency)");
  run->add_option("--n-states", args.n_states, "Override n_states");
  run->add_option("--steps", args.steps, "Override steps");

  CLI::App* presets = app.add_subcommand("presets", "List named presets with provenance");
  CLI::App* check = app.add_subcommand("check", "Run the fast invariant suite");
  CLI::App* schema = app.add_subcommand("schema", "Print the config JSON schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      if (args.config_path.empty() && args.preset.empty()) {
        std::cerr << "error: run needs --config or --preset\n";
        return kExitConfig;
      }
      return do_run(args);
    }
    if (*presets) return do_presets();
    if (*check) return do_check();
    if (*schema) {
      std::cout << cmt::config_schema();
      return 0;
    }
  } catch (const cmt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool config_error =
        e.code() == cmt::ErrorCode::kInvalidConfig || e.code() == cmt::ErrorCode::kUnknownObservable;
    return config_error ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
