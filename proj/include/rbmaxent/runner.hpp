// Copyright 2026 The rbmaxent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment orchestration behind the command-line tool. Every command is a
// plain function so tests can drive it without a subprocess.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rbmaxent/io.hpp"
#include "rbmaxent/optimizer.hpp"

namespace rbmaxent {

struct ExperimentSpec {
  int n_sys = 3;
  int n_env_target = 3;  ///< environment used to generate the target state
  int n_env_model = 3;   ///< environment units of the RBM
  int m = 3;
  int observable_count = 4;
  std::uint64_t observable_seed = 1;
  std::string observable_alphabet = "XYZ";
  int circuit_layers = 4;
  std::uint64_t circuit_seed = 1;
  Real init_std = 0.05;
  std::uint64_t init_seed = 1;
  int seeds = 1;  ///< > 1 runs a seed sweep
  int dense_cap = kDefaultDenseCap;
  SamplerConfig sampler;
  OptimizerConfig optimizer;
  XiSchedule schedule;
  std::filesystem::path output_dir = "runs/default";
};

void validate(const ExperimentSpec& spec);

Json spec_to_json(const ExperimentSpec& spec);
/// Fields absent from `j` keep their defaults; unknown keys are rejected.
ExperimentSpec spec_from_json(const Json& j);

/// Applies "key=value" with a dotted key ("optimizer.epochs=50"). The value
/// is read as JSON when it parses and as a string otherwise.
void apply_override(Json& j, const std::string& assignment);

/// Output root: $RBMAXENT_OUTPUT_ROOT if set, else "runs".
std::filesystem::path default_output_root();

struct ReportRecord {
  std::vector<Real> residuals;  ///< |<O_i> - target_i|
  Real total_residual = 0;
  std::optional<Real> s2_sampled_bits;
  std::optional<Real> s2_exact_bits;
  Real entropy_upper_bound = 0;  ///< min(n_sys, n_env_model)
  bool within_entropy_bound = true;
  bool pure_ansatz_floor = false;  ///< n_env_model = 0 against a mixed target
  Real seconds_per_epoch = 0;
  int epochs_completed = 0;
  bool ok = true;
  std::string status = "ok";
};

Json report_to_json(const ReportRecord& r);

/// Builds the random-circuit target; writes <out>/target.json when `write`.
TargetState cmd_gen_target(const ExperimentSpec& spec, bool write = true);

/// Trains against `target` and writes the full output bundle. A seed sweep
/// writes one bundle per seed under seed_<i>/ and median curves at the top.
/// Returns the report of the first seed (or the only run).
ReportRecord cmd_train(const ExperimentSpec& spec, const TargetState& target);

/// Per-seed results of a sweep, in seed order.
struct SweepResult {
  std::vector<ReportRecord> reports;
  std::vector<TrainingTrace> traces;
  std::vector<Real> median_cost;  ///< per epoch
};
SweepResult run_seed_sweep(const ExperimentSpec& spec, const TargetState& target);

/// Recomputes residuals and S2 from a checkpoint; exact when the register fits
/// the dense cap, sampled otherwise.
ReportRecord cmd_eval(const Checkpoint& checkpoint, const TargetState& target,
                      const SamplerConfig& sampler = {},
                      int dense_cap = kDefaultDenseCap);

enum class GradFault { kNone, kEntropySignFlip };

struct GradcheckReport {
  bool pass = false;
  Real max_rel_error = 0;  ///< over coordinates with |analytic| >= atol
  Real max_abs_error = 0;  ///< over all coordinates
  int worst_index = -1;
  std::string worst_coordinate;
  Real analytic = 0;
  Real numeric = 0;
  int coordinates = 0;
};

/// Exact-mode analytic cost gradient against central differences on a random
/// instance. Relative tolerance `rtol`, absolute `atol` for near-zero entries.
GradcheckReport cmd_gradcheck(int n_sys, int n_env, int m, std::uint64_t seed,
                              Real h = 1e-5, GradFault fault = GradFault::kNone,
                              Real rtol = 1e-5, Real atol = 1e-8);

/// Runs every proposal kind on one RBM instance and reports diagnostics,
/// including TV distance to the exact distribution.
std::vector<SamplerDiagnostics> cmd_bench_sampler(const ExperimentSpec& spec,
                                                  Real param_std = 0.5);

/// Rows "epoch,cost,entropy_bits,total_residual".
std::string curves_csv(const TrainingTrace& trace);

}  // namespace rbmaxent
