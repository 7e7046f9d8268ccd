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

#include "rbmaxent/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rbmaxent {

namespace {

// Every accessor funnels nlohmann's exceptions into kParse.
template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::kParse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("bad field '") + key + "': " + e.what());
  }
}

Json real_array(const VectorXr& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

VectorXr vector_field(const Json& j, const char* key, Eigen::Index expected) {
  const auto raw = field<std::vector<Real>>(j, key);
  require(static_cast<Eigen::Index>(raw.size()) == expected, ErrorKind::kParse,
          std::string("field '") + key + "' has the wrong length");
  return Eigen::Map<const VectorXr>(raw.data(), expected);
}

MatrixXr matrix_field(const Json& j, const char* key, Eigen::Index rows,
                      Eigen::Index cols) {
  const auto raw = field<std::vector<std::vector<Real>>>(j, key);
  require(static_cast<Eigen::Index>(raw.size()) == rows, ErrorKind::kParse,
          std::string("field '") + key + "' has the wrong row count");
  MatrixXr m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = raw[static_cast<std::size_t>(r)];
    require(static_cast<Eigen::Index>(row.size()) == cols, ErrorKind::kParse,
            std::string("field '") + key + "' has the wrong column count");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

Json matrix_json(const MatrixXr& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(real_array(m.row(r).transpose()));
  return out;
}

}  // namespace

// --------------------------------------------------------------- checkpoint

Json checkpoint_to_json(const RbmParams& params, const Partition& partition) {
  validate(params, partition);
  Json j;
  j["n_sys"] = partition.n_sys;
  j["n_env"] = partition.n_env;
  j["m"] = params.n_hidden();
  j["beta"] = params.beta;
  j["a_re"] = real_array(params.a.real());
  j["a_im"] = real_array(params.a.imag());
  j["b_re"] = real_array(params.b.real());
  j["b_im"] = real_array(params.b.imag());
  j["w_re"] = matrix_json(params.w.real());
  j["w_im"] = matrix_json(params.w.imag());
  return j;
}

Checkpoint checkpoint_from_json(const Json& j) {
  Checkpoint c;
  c.partition.n_sys = field<int>(j, "n_sys");
  c.partition.n_env = field<int>(j, "n_env");
  const int m = field<int>(j, "m");
  const int nv = c.partition.n_visible();
  require(c.partition.n_sys >= 1 && c.partition.n_env >= 0 && m >= 1,
          ErrorKind::kParse, "checkpoint sizes are invalid");
  c.params.beta = field<Real>(j, "beta");
  c.params.a = vector_field(j, "a_re", nv).cast<Complex>() +
               Complex(0, 1) * vector_field(j, "a_im", nv).cast<Complex>();
  c.params.b = vector_field(j, "b_re", m).cast<Complex>() +
               Complex(0, 1) * vector_field(j, "b_im", m).cast<Complex>();
  c.params.w = matrix_field(j, "w_re", nv, m).cast<Complex>() +
               Complex(0, 1) * matrix_field(j, "w_im", nv, m).cast<Complex>();
  try {
    validate(c.params, c.partition);
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, std::string("invalid checkpoint: ") + e.what());
  }
  return c;
}

// ------------------------------------------------------------------ target

Json target_to_json(const TargetState& t) {
  Json j;
  j["system_qubits"] = t.system_qubits;
  j["env_qubits"] = t.env_qubits;
  j["circuit_seed"] = t.circuit_seed;
  j["layers"] = t.layers;
  Json obs = Json::array();
  for (std::size_t i = 0; i < t.observables.size(); ++i)
    obs.push_back({{"pauli", t.observables[i].identifier()}, {"target", t.targets[i]}});
  j["observables"] = obs;
  j["exact_entropy_s2_bits"] = t.exact_entropy_s2_bits;
  j["exact_entropy_vne_bits"] = t.exact_entropy_vne_bits;
  return j;
}

TargetState target_from_json(const Json& j) {
  TargetState t;
  t.system_qubits = field<int>(j, "system_qubits");
  t.env_qubits = field<int>(j, "env_qubits");
  t.circuit_seed = field<std::uint64_t>(j, "circuit_seed");
  t.layers = field<int>(j, "layers");
  t.exact_entropy_s2_bits = field<Real>(j, "exact_entropy_s2_bits");
  if (j.contains("exact_entropy_vne_bits"))
    t.exact_entropy_vne_bits = field<Real>(j, "exact_entropy_vne_bits");
  const Json obs = field<Json>(j, "observables");
  require(obs.is_array(), ErrorKind::kParse, "observables must be an array");
  for (const auto& o : obs) {
    try {
      t.observables.emplace_back(field<std::string>(o, "pauli"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kParse) throw;
      throw Error(ErrorKind::kParse, e.what());
    }
    t.targets.push_back(field<Real>(o, "target"));
    require(t.observables.back().size() == t.system_qubits, ErrorKind::kParse,
            "observable length differs from system_qubits");
  }
  return t;
}

void write_amplitudes(const std::filesystem::path& path, const StateVector& psi) {
  static_assert(std::endian::native == std::endian::little,
                "amplitude files are little-endian");
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot open " + path.string());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double pair[2] = {psi(i).real(), psi(i).imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof pair);
  }
  require(static_cast<bool>(out), ErrorKind::kIo, "write failed: " + path.string());
}

StateVector read_amplitudes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  require(bytes.size() % (2 * sizeof(double)) == 0, ErrorKind::kParse,
          "amplitude file size is not a multiple of 16 bytes");
  const auto n = static_cast<Eigen::Index>(bytes.size() / (2 * sizeof(double)));
  StateVector psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double pair[2];
    std::memcpy(pair, bytes.data() + i * static_cast<Eigen::Index>(sizeof pair), sizeof pair);
    psi(i) = Complex(pair[0], pair[1]);
  }
  return psi;
}

// ------------------------------------------------------------------- trace

Json record_to_json(const TrainingRecord& r) {
  Json j;
  j["epoch"] = r.epoch;
  j["cost"] = r.cost;
  j["entropy_bits"] = r.entropy_bits;
  j["entropy_kind"] = r.entropy_kind;
  j["residuals"] = r.residuals;
  j["xi_values"] = r.xi_values;
  j["acceptance_rate"] = r.acceptance_rate;
  j["grad_norm"] = r.grad_norm;
  j["clip_events"] = r.clip_events;
  j["estimation_failures"] = r.estimation_failures;
  return j;
}

TrainingRecord record_from_json(const Json& j) {
  TrainingRecord r;
  r.epoch = field<int>(j, "epoch");
  r.cost = field<Real>(j, "cost");
  r.entropy_bits = field<Real>(j, "entropy_bits");
  r.entropy_kind = field<std::string>(j, "entropy_kind");
  r.residuals = field<std::vector<Real>>(j, "residuals");
  r.xi_values = field<std::vector<Real>>(j, "xi_values");
  r.acceptance_rate = field<Real>(j, "acceptance_rate");
  r.grad_norm = field<Real>(j, "grad_norm");
  r.clip_events = field<int>(j, "clip_events");
  r.estimation_failures = field<int>(j, "estimation_failures");
  return r;
}

Json diagnostics_to_json(const SamplerDiagnostics& d) {
  Json j;
  j["proposal"] = to_string(d.proposal);
  j["acceptance_rate"] = d.acceptance_rate;
  j["autocorr_time"] = d.autocorr_time;
  j["tv_distance_if_exact_available"] =
      d.tv_distance ? Json(*d.tv_distance) : Json(nullptr);
  j["n_samples"] = d.n_samples;
  j["seed"] = d.seed;
  return j;
}

// ------------------------------------------------------------------- files

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::kIo, "write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_trace_jsonl(const std::filesystem::path& path, const TrainingTrace& trace) {
  std::ostringstream os;
  for (const auto& r : trace.records) os << record_to_json(r).dump() << '\n';
  write_text_file(path, os.str());
}

TrainingTrace read_trace_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  TrainingTrace trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      trace.records.push_back(record_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace rbmaxent
