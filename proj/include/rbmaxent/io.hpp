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

// JSON documents exchanged with the outside world: parameter checkpoints,
// target states, training traces and sampler diagnostics.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbmaxent/common.hpp"
#include "rbmaxent/dense.hpp"
#include "rbmaxent/optimizer.hpp"
#include "rbmaxent/rbm.hpp"
#include "rbmaxent/sampler.hpp"

namespace rbmaxent {

using Json = nlohmann::ordered_json;

struct Checkpoint {
  RbmParams params;
  Partition partition;
};

Json checkpoint_to_json(const RbmParams& params, const Partition& partition);
/// Throws kParse on missing fields, wrong shapes or non-numeric entries.
Checkpoint checkpoint_from_json(const Json& j);

struct TargetState {
  int system_qubits = 1;
  int env_qubits = 0;
  std::uint64_t circuit_seed = 0;
  int layers = 1;
  std::vector<PauliString> observables;
  std::vector<Real> targets;
  Real exact_entropy_s2_bits = 0;
  Real exact_entropy_vne_bits = 0;
};

Json target_to_json(const TargetState& t);
TargetState target_from_json(const Json& j);

/// Interleaved little-endian float64 (re, im) pairs.
void write_amplitudes(const std::filesystem::path& path, const StateVector& psi);
StateVector read_amplitudes(const std::filesystem::path& path);

Json record_to_json(const TrainingRecord& r);
TrainingRecord record_from_json(const Json& j);

Json diagnostics_to_json(const SamplerDiagnostics& d);

/// Whole-file helpers. Throw kIo on filesystem failures and kParse on
/// malformed content.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_trace_jsonl(const std::filesystem::path& path, const TrainingTrace& trace);
TrainingTrace read_trace_jsonl(const std::filesystem::path& path);

}  // namespace rbmaxent
