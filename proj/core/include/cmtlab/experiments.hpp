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

// Config-driven experiment runner. A run expands the sweep into cells
// (sweep value × state index), executes them on a thread pool and merges
// results in cell order, so output bytes never depend on scheduling.
//
// Random streams: every draw comes from derive_seed(seed, a, b, c) with
//   a = sweep index + 1 (0 for sweep-independent draws),
//   b = state or sample index + 1 (0 when not per state),
//   c = purpose tag (StreamTag below).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmtlab/dynamics.hpp"
#include "cmtlab/rmt.hpp"
#include "cmtlab/tomography.hpp"

namespace cmt {

const char* tool_version();

enum class ExperimentKind { kPhaseSpace, kTomo, kKrylov, kPerturb, kRmtCompare, kOrderedBloch };

const char* to_string(ExperimentKind kind);

enum StreamTag : std::uint64_t {
  kStreamObservable = 1,
  kStreamState = 2,
  kStreamNoise = 3,
  kStreamEnsemble = 4,
  kStreamOrbit = 5,
  kStreamBasisRotation = 6,
};

struct Sweep {
  std::string param = "none";
  std::vector<double> values{0.0};
};

enum class InitialState { kHaar, kCoherent };

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kTomo;
  ModelSpec model = KickedTop{};
  std::string observable;  // empty → model default
  int steps = 50;
  double sigma = kDefaultSigma;
  int n_states = 50;
  Sweep sweep;
  std::uint64_t seed = 1;
  std::string output_path;  // empty or "-" → stdout

  InitialState state = InitialState::kHaar;
  double theta = 2.04;
  double phi = 2.42;
  int stride = 1;
  double delta_lambda = 0.01;
  double eta = 0.0;
  bool include_ideal = true;
  int quad_theta = 64;
  int quad_phi = 128;
  EnsembleKind ensemble = EnsembleKind::kCOE;
  int rmt_samples = 10;
  bool reflection_blocks = true;
  double rank_tol = kDefaultRankTol;
  SolverOptions solver;
  int threads = 0;  // 0 → hardware concurrency
  std::string provenance;

  // Canonical JSON of the merged config tree; the CSV header hashes it.
  std::string canonical;
};

/// Parses a JSON config and applies dotted-path overrides of the form
/// "key.sub=value" (value parsed as JSON, falling back to a string).
/// Throws kInvalidConfig naming the offending field, or kUnknownObservable.
ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides = {});

/// JSON Schema describing the config tree.
const std::string& config_schema();

/// FNV-1a 64 of the canonical config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Model-appropriate default observable name.
std::string default_observable(const ModelSpec& model);

/// Builds a named observable. Names: J_x, J_y, J_z, random-J_x (kicked
/// top); s<k><axis>, S<axis>, random-local (chains), and sums joined by
/// '+', e.g. "s2y+s4y". Random names draw from `seed`.
CMat build_observable(const std::string& name, const ModelSpec& model, std::uint64_t seed);
std::vector<std::string> known_observables();

/// Returns the model with `param` set to `value`; config-level parameters
/// (sigma, delta_lambda, eta, theta, phi) are applied to the config.
ExperimentConfig apply_sweep_value(const ExperimentConfig& config, double value);

struct ResultRow {
  std::string sweep_param;
  double sweep_value = 0.0;
  int step = 0;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  int n = 0;
};

struct ResultTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<ResultRow> rows;
};

struct RunResult {
  ResultTable table;
  int nonconverged = 0;  // positivity solves that missed the KKT tolerance
};

RunResult run_experiment(const ExperimentConfig& config);

/// UTF-8, '\n' line endings, '#' comment header, long-format columns
/// sweep_param,sweep_value,step,metric,mean,stderr,n.
void write_csv(const ResultTable& table, std::ostream& out);

struct Preset {
  std::string name;
  std::string provenance;
  std::string config_json;
};

const std::vector<Preset>& list_presets();
const Preset& find_preset(const std::string& name);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant suite behind the `check` command.
std::vector<CheckOutcome> run_invariant_checks();

}  // namespace cmt
