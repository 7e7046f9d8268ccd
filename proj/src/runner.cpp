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

#include "rbmaxent/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "rbmaxent/estimator.hpp"

namespace rbmaxent {

namespace {

const char* method_name(UpdateMethod m) {
  return m == UpdateMethod::kAdaptiveMoment ? "adaptive_moment" : "plain_gradient";
}

const char* entropy_mode_name(EntropyMode m) {
  return m == EntropyMode::kRenyi2 ? "renyi2" : "renyi2_then_vne";
}

// Reads optional members of one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j.is_object(), ErrorKind::kValidation, where_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kValidation,
                  where_ + "." + key + " has the wrong type: " + e.what());
    }
  }

  const Json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      require(seen_.count(key) > 0, ErrorKind::kValidation,
              "unknown key '" + where_ + "." + key + "'");
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

Real median(std::vector<Real> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Real total_abs(const std::vector<Real>& r) {
  Real s = 0;
  for (Real x : r) s += std::abs(x);
  return s;
}

ConstraintSet constraints_of(const TargetState& target, Real xi) {
  ConstraintSet c;
  for (std::size_t i = 0; i < target.observables.size(); ++i)
    c.entries.push_back({target.observables[i], target.targets[i], xi});
  return c;
}

struct RunOutput {
  ReportRecord report;
  TrainingTrace trace;
};

RunOutput run_single(const ExperimentSpec& spec, const TargetState& target,
                     int index, const std::filesystem::path& dir) {
  const Partition partition{spec.n_sys, spec.n_env_model};
  const auto offset = static_cast<std::uint64_t>(index);
  std::mt19937_64 rng(splitmix64(spec.init_seed + offset));
  const RbmParams init =
      RbmParams::random(partition.n_visible(), spec.m, spec.init_std, rng);
  OptimizerConfig opt = spec.optimizer;
  opt.seed = spec.optimizer.seed + offset;
  SamplerConfig sampler = spec.sampler;
  sampler.seed = spec.sampler.seed + offset;

  const auto t0 = std::chrono::steady_clock::now();
  TrainResult res = train(init, partition, constraints_of(target, spec.schedule.xi_init),
                          spec.schedule, opt, sampler);
  const std::chrono::duration<Real> elapsed = std::chrono::steady_clock::now() - t0;

  RunOutput out;
  out.report = cmd_eval(Checkpoint{res.params, partition}, target, sampler, spec.dense_cap);
  out.report.epochs_completed = static_cast<int>(res.trace.records.size());
  out.report.seconds_per_epoch =
      elapsed.count() / std::max(1, out.report.epochs_completed);
  if (!res.trace.records.empty())
    out.report.s2_sampled_bits = res.trace.records.back().entropy_bits;
  out.report.ok = res.ok && out.report.ok;
  if (!res.ok) out.report.status = res.status;

  ExperimentSpec written = spec;
  written.optimizer.seed = opt.seed;
  written.sampler.seed = sampler.seed;
  written.output_dir = dir;
  write_json_file(dir / "spec.json", spec_to_json(written));
  write_json_file(dir / "target.json", target_to_json(target));
  write_trace_jsonl(dir / "trace.jsonl", res.trace);
  write_json_file(dir / "checkpoint.json", checkpoint_to_json(res.params, partition));
  write_json_file(dir / "report.json", report_to_json(out.report));
  write_text_file(dir / "curves.csv", curves_csv(res.trace));
  out.trace = std::move(res.trace);
  return out;
}

}  // namespace

// -------------------------------------------------------------------- spec

void validate(const ExperimentSpec& spec) {
  require(spec.n_sys >= 1 && spec.n_env_target >= 0 && spec.n_env_model >= 0,
          ErrorKind::kValidation, "qubit counts must be non-negative (n_sys >= 1)");
  require(spec.m >= 1, ErrorKind::kValidation, "m must be >= 1");
  require(spec.observable_count >= 1, ErrorKind::kValidation,
          "observable_count must be >= 1");
  require(spec.circuit_layers >= 1, ErrorKind::kValidation, "circuit layers must be >= 1");
  require(spec.seeds >= 1, ErrorKind::kValidation, "seeds must be >= 1");
  require(spec.init_std >= 0, ErrorKind::kValidation, "init_std must be >= 0");
  require(spec.n_sys + spec.n_env_target <= spec.dense_cap, ErrorKind::kCapExceeded,
          "target register exceeds the dense cap");
  require(spec.n_sys + spec.n_env_model <= spec.dense_cap, ErrorKind::kCapExceeded,
          "model register exceeds the dense cap");
  validate(spec.sampler);
  validate(spec.optimizer);
  validate(spec.schedule);
}

Json spec_to_json(const ExperimentSpec& s) {
  Json j;
  j["n_sys"] = s.n_sys;
  j["n_env_target"] = s.n_env_target;
  j["n_env_model"] = s.n_env_model;
  j["m"] = s.m;
  j["observable_count"] = s.observable_count;
  j["observable_seed"] = s.observable_seed;
  j["observable_alphabet"] = s.observable_alphabet;
  j["circuit_layers"] = s.circuit_layers;
  j["circuit_seed"] = s.circuit_seed;
  j["init_std"] = s.init_std;
  j["init_seed"] = s.init_seed;
  j["seeds"] = s.seeds;
  j["dense_cap"] = s.dense_cap;
  j["output_dir"] = s.output_dir.string();
  j["sampler"] = {{"n_samples", s.sampler.n_samples},
                  {"burn_in", s.sampler.burn_in},
                  {"thinning", s.sampler.thinning},
                  {"n_chains", s.sampler.n_chains},
                  {"seed", s.sampler.seed},
                  {"proposal", to_string(s.sampler.proposal)}};
  const auto& o = s.optimizer;
  j["optimizer"] = {{"epochs", o.epochs},
                    {"learning_rate", o.learning_rate},
                    {"lr_final", o.lr_final},
                    {"method", method_name(o.method)},
                    {"samples_per_epoch", o.samples_per_epoch},
                    {"entropy_mode", entropy_mode_name(o.entropy_mode)},
                    {"vne_cutoff", o.vne_cutoff},
                    {"seed", o.seed},
                    {"estimation", to_string(o.estimation)},
                    {"grad_clip", o.grad_clip},
                    {"surrogate_tau", o.surrogate_tau},
                    {"surrogate_gamma", o.surrogate_gamma},
                    {"surrogate_n_trot", o.surrogate_n_trot}};
  j["schedule"] = {{"xi_init", s.schedule.xi_init},
                   {"growth", s.schedule.growth},
                   {"block", s.schedule.block},
                   {"xi_max", s.schedule.xi_max}};
  return j;
}

ExperimentSpec spec_from_json(const Json& j) {
  ExperimentSpec s;
  ObjectReader r(j, "spec");
  r.get("n_sys", s.n_sys);
  r.get("n_env_target", s.n_env_target);
  r.get("n_env_model", s.n_env_model);
  r.get("m", s.m);
  r.get("observable_count", s.observable_count);
  r.get("observable_seed", s.observable_seed);
  r.get("observable_alphabet", s.observable_alphabet);
  r.get("circuit_layers", s.circuit_layers);
  r.get("circuit_seed", s.circuit_seed);
  r.get("init_std", s.init_std);
  r.get("init_seed", s.init_seed);
  r.get("seeds", s.seeds);
  r.get("dense_cap", s.dense_cap);
  std::string out = s.output_dir.string();
  r.get("output_dir", out);
  s.output_dir = out;
  if (const Json* c = r.child("sampler")) {
    ObjectReader sr(*c, "sampler");
    std::string proposal = to_string(s.sampler.proposal);
    sr.get("n_samples", s.sampler.n_samples);
    sr.get("burn_in", s.sampler.burn_in);
    sr.get("thinning", s.sampler.thinning);
    sr.get("n_chains", s.sampler.n_chains);
    sr.get("seed", s.sampler.seed);
    sr.get("proposal", proposal);
    sr.finish();
    s.sampler.proposal = proposal_from_string(proposal);
  }
  if (const Json* c = r.child("optimizer")) {
    ObjectReader orr(*c, "optimizer");
    auto& o = s.optimizer;
    std::string method = method_name(o.method);
    std::string mode = entropy_mode_name(o.entropy_mode);
    std::string estimation = to_string(o.estimation);
    orr.get("epochs", o.epochs);
    orr.get("learning_rate", o.learning_rate);
    orr.get("lr_final", o.lr_final);
    orr.get("method", method);
    orr.get("samples_per_epoch", o.samples_per_epoch);
    orr.get("entropy_mode", mode);
    orr.get("vne_cutoff", o.vne_cutoff);
    orr.get("seed", o.seed);
    orr.get("estimation", estimation);
    orr.get("grad_clip", o.grad_clip);
    orr.get("surrogate_tau", o.surrogate_tau);
    orr.get("surrogate_gamma", o.surrogate_gamma);
    orr.get("surrogate_n_trot", o.surrogate_n_trot);
    orr.finish();
    if (method == "adaptive_moment" || method == "adam") {
      o.method = UpdateMethod::kAdaptiveMoment;
    } else if (method == "plain_gradient" || method == "sgd") {
      o.method = UpdateMethod::kPlainGradient;
    } else {
      throw Error(ErrorKind::kValidation, "unknown optimizer.method '" + method + "'");
    }
    if (mode == "renyi2") {
      o.entropy_mode = EntropyMode::kRenyi2;
    } else if (mode == "renyi2_then_vne") {
      o.entropy_mode = EntropyMode::kRenyi2ThenVne;
    } else {
      throw Error(ErrorKind::kValidation, "unknown optimizer.entropy_mode '" + mode + "'");
    }
    if (estimation == "sampled") {
      o.estimation = EstimationMode::kSampled;
    } else if (estimation == "exact_sum") {
      o.estimation = EstimationMode::kExactSum;
    } else {
      throw Error(ErrorKind::kValidation,
                  "unknown optimizer.estimation '" + estimation + "'");
    }
  }
  if (const Json* c = r.child("schedule")) {
    ObjectReader xr(*c, "schedule");
    xr.get("xi_init", s.schedule.xi_init);
    xr.get("growth", s.schedule.growth);
    xr.get("block", s.schedule.block);
    xr.get("xi_max", s.schedule.xi_max);
    xr.finish();
  }
  r.finish();
  return s;
}

void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, ErrorKind::kValidation,
          "override must look like key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const nlohmann::json::exception&) {
    value = raw;
  }
  Json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    require(!part.empty(), ErrorKind::kValidation, "bad override key '" + key + "'");
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("RBMAXENT_OUTPUT_ROOT"); env && *env) return env;
  return "runs";
}

Json report_to_json(const ReportRecord& r) {
  Json j;
  j["residuals"] = r.residuals;
  j["total_residual"] = r.total_residual;
  j["s2_sampled_bits"] = r.s2_sampled_bits ? Json(*r.s2_sampled_bits) : Json(nullptr);
  j["s2_exact_bits"] = r.s2_exact_bits ? Json(*r.s2_exact_bits) : Json(nullptr);
  j["entropy_upper_bound"] = r.entropy_upper_bound;
  j["within_entropy_bound"] = r.within_entropy_bound;
  j["pure_ansatz_floor"] = r.pure_ansatz_floor;
  j["seconds_per_epoch"] = r.seconds_per_epoch;
  j["epochs_completed"] = r.epochs_completed;
  j["ok"] = r.ok;
  j["status"] = r.status;
  return j;
}

std::string curves_csv(const TrainingTrace& trace) {
  std::ostringstream os;
  os << std::setprecision(10) << "epoch,cost,entropy_bits,total_residual\n";
  for (const auto& r : trace.records)
    os << r.epoch << ',' << r.cost << ',' << r.entropy_bits << ','
       << total_abs(r.residuals) << '\n';
  return os.str();
}

// ----------------------------------------------------------------- commands

TargetState cmd_gen_target(const ExperimentSpec& spec, bool write) {
  validate(spec);
  const int n_total = spec.n_sys + spec.n_env_target;
  const StateVector psi = random_circuit_state(
      CircuitSpec{n_total, spec.circuit_layers, spec.circuit_seed}, spec.dense_cap);
  std::vector<int> keep(static_cast<std::size_t>(spec.n_sys));
  std::iota(keep.begin(), keep.end(), 0);
  const DensityMatrix rho = partial_trace(psi, keep);

  TargetState t;
  t.system_qubits = spec.n_sys;
  t.env_qubits = spec.n_env_target;
  t.circuit_seed = spec.circuit_seed;
  t.layers = spec.circuit_layers;
  t.observables = random_pauli_strings(spec.n_sys, spec.observable_count,
                                       spec.observable_seed, spec.observable_alphabet);
  for (const auto& o : t.observables) t.targets.push_back(pauli_expectation_exact(rho, o));
  t.exact_entropy_s2_bits = entropy_exact(rho, EntropyOrder::renyi(2));
  t.exact_entropy_vne_bits = entropy_exact(rho, EntropyOrder::vne());
  if (write) {
    write_json_file(spec.output_dir / "spec.json", spec_to_json(spec));
    write_json_file(spec.output_dir / "target.json", target_to_json(t));
  }
  return t;
}

SweepResult run_seed_sweep(const ExperimentSpec& spec, const TargetState& target) {
  validate(spec);
  require(target.system_qubits == spec.n_sys, ErrorKind::kValidation,
          "target system size differs from the experiment config");
  const int n = spec.seeds;
  std::vector<RunOutput> outs(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  const auto dir_of = [&](int i) {
    return n == 1 ? spec.output_dir : spec.output_dir / ("seed_" + std::to_string(i));
  };
  const auto work = [&](int i) {
    try {
      outs[static_cast<std::size_t>(i)] = run_single(spec, target, i, dir_of(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  // Independent runs; each owns its subdirectory.
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepResult sweep;
  std::size_t longest = 0;
  for (auto& o : outs) {
    longest = std::max(longest, o.trace.records.size());
    sweep.reports.push_back(o.report);
    sweep.traces.push_back(std::move(o.trace));
  }
  TrainingTrace median_trace;
  for (std::size_t e = 0; e < longest; ++e) {
    std::vector<Real> cost, entropy, resid;
    for (const auto& t : sweep.traces) {
      if (e >= t.records.size()) continue;
      cost.push_back(t.records[e].cost);
      entropy.push_back(t.records[e].entropy_bits);
      resid.push_back(total_abs(t.records[e].residuals));
    }
    sweep.median_cost.push_back(median(cost));
    TrainingRecord r;
    r.epoch = static_cast<int>(e) + 1;
    r.cost = median(cost);
    r.entropy_bits = median(entropy);
    r.residuals = {median(resid)};
    median_trace.records.push_back(r);
  }
  if (n > 1) {
    write_json_file(spec.output_dir / "spec.json", spec_to_json(spec));
    write_json_file(spec.output_dir / "target.json", target_to_json(target));
    write_text_file(spec.output_dir / "curves.csv", curves_csv(median_trace));
    Json summary;
    Json per_seed = Json::array();
    std::vector<Real> totals;
    for (const auto& r : sweep.reports) {
      per_seed.push_back(report_to_json(r));
      totals.push_back(r.total_residual);
    }
    summary["seeds"] = n;
    summary["median_total_residual"] = median(totals);
    summary["median_cost_first_epoch"] =
        sweep.median_cost.empty() ? Json(nullptr) : Json(sweep.median_cost.front());
    summary["median_cost_final_epoch"] =
        sweep.median_cost.empty() ? Json(nullptr) : Json(sweep.median_cost.back());
    summary["runs"] = per_seed;
    write_json_file(spec.output_dir / "report.json", summary);
  }
  return sweep;
}

ReportRecord cmd_train(const ExperimentSpec& spec, const TargetState& target) {
  return run_seed_sweep(spec, target).reports.front();
}

ReportRecord cmd_eval(const Checkpoint& checkpoint, const TargetState& target,
                      const SamplerConfig& sampler, int dense_cap) {
  const Partition& part = checkpoint.partition;
  const RbmParams& params = checkpoint.params;
  validate(params, part);
  require(part.n_sys == target.system_qubits, ErrorKind::kValidation,
          "checkpoint and target have different system sizes");
  ReportRecord rep;
  rep.entropy_upper_bound = std::min(part.n_sys, part.n_env);
  rep.pure_ansatz_floor = part.n_env == 0 && target.exact_entropy_s2_bits > 1e-9;

  if (part.n_visible() <= dense_cap) {
    const DensityMatrix rho = exact_density_matrix(params, part, dense_cap);
    for (std::size_t i = 0; i < target.observables.size(); ++i)
      rep.residuals.push_back(
          std::abs(pauli_expectation_exact(rho, target.observables[i]) - target.targets[i]));
    rep.s2_exact_bits = entropy_exact(rho, EntropyOrder::renyi(2));
  } else {
    const auto reps = sample_replicas(params, sampler, 2);
    for (std::size_t i = 0; i < target.observables.size(); ++i)
      rep.residuals.push_back(std::abs(
          estimate_observable(params, part, target.observables[i], reps[0].samples).value -
          target.targets[i]));
    try {
      rep.s2_sampled_bits =
          estimate_swap(params, part, reps[0].samples, reps[1].samples).s2_bits;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kEstimation) throw;
      rep.status = std::string("entropy estimate unavailable: ") + e.what();
    }
  }
  rep.total_residual = total_abs(rep.residuals);
  const Real s2 = rep.s2_exact_bits.value_or(rep.s2_sampled_bits.value_or(0.0));
  rep.within_entropy_bound = s2 <= rep.entropy_upper_bound + 0.05;
  return rep;
}

GradcheckReport cmd_gradcheck(int n_sys, int n_env, int m, std::uint64_t seed, Real h,
                              GradFault fault, Real rtol, Real atol) {
  const Partition part{n_sys, n_env};
  require(n_sys >= 1 && n_env >= 0 && m >= 1, ErrorKind::kValidation,
          "gradcheck sizes are invalid");
  require(part.n_visible() <= 10, ErrorKind::kCapExceeded,
          "gradcheck enumerates all replica pairs; keep n_v <= 10");
  std::mt19937_64 rng(splitmix64(seed));
  const RbmParams params = RbmParams::random(part.n_visible(), m, 0.5, rng);
  const int pool = (1 << (2 * n_sys)) - 1;
  const auto obs = random_pauli_strings(n_sys, std::min(2, pool), splitmix64(seed + 1));
  std::uniform_real_distribution<Real> target_dist(-0.5, 0.5), xi_dist(0.5, 2.0);
  ConstraintSet cs;
  std::vector<Real> xis;
  for (const auto& o : obs) {
    const Real t = target_dist(rng);
    xis.push_back(xi_dist(rng));
    cs.entries.push_back({o, t, xis.back()});
  }

  const VectorXr x = pack_parameters(params);
  VectorXr analytic = exact_cost_gradient(params, part, cs, xis);
  if (fault == GradFault::kEntropySignFlip)
    analytic += 2.0 * grad_entropy_term_exact(params, part).grad_bits;
  // Central differences of the cost evaluated in long double.
  VectorXr numeric(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXr xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const long double fp =
        exact_cost_extended(unpack_parameters(xp, part.n_visible(), m, params.beta), part, cs, xis);
    const long double fm =
        exact_cost_extended(unpack_parameters(xm, part.n_visible(), m, params.beta), part, cs, xis);
    numeric(i) = static_cast<Real>((fp - fm) / (2.0L * h));
  }

  GradcheckReport rep;
  rep.coordinates = static_cast<int>(x.size());
  rep.pass = true;
  Real worst_score = -1;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Real err = std::abs(analytic(i) - numeric(i));
    const bool tiny = std::abs(analytic(i)) < atol;
    const Real score = tiny ? err / atol : err / (rtol * std::abs(analytic(i)));
    if (score > 1.0) rep.pass = false;
    if (!tiny) rep.max_rel_error = std::max(rep.max_rel_error, err / std::abs(analytic(i)));
    rep.max_abs_error = std::max(rep.max_abs_error, err);
    if (score > worst_score) {
      worst_score = score;
      rep.worst_index = static_cast<int>(i);
      rep.analytic = analytic(i);
      rep.numeric = numeric(i);
    }
  }
  const ParamCoord c = coord_of(rep.worst_index, part.n_visible(), m);
  rep.worst_coordinate = std::string(to_string(c.family)) + "[" + std::to_string(c.k) +
                         "," + std::to_string(c.p) + "]";
  return rep;
}

std::vector<SamplerDiagnostics> cmd_bench_sampler(const ExperimentSpec& spec,
                                                  Real param_std) {
  const int nv = spec.n_sys + spec.n_env_model;
  require(nv <= std::min(spec.dense_cap, kDefaultTrotterCap), ErrorKind::kCapExceeded,
          "bench-sampler needs the exact distribution; register too large");
  validate(spec.sampler);
  std::mt19937_64 rng(splitmix64(spec.init_seed));
  const RbmParams params = RbmParams::random(nv, spec.m, param_std, rng);
  const VectorXr exact = exact_distribution(params);
  std::vector<SamplerDiagnostics> out;
  for (const ProposalKind kind :
       {ProposalKind::kLocalFlip, ProposalKind::kUniform, ProposalKind::kSurrogateTrotter}) {
    SamplerConfig c = spec.sampler;
    c.proposal = kind;
    std::optional<TrotterProposal> proposal;
    if (kind == ProposalKind::kSurrogateTrotter) {
      SamplerConfig warm = c;
      warm.proposal = ProposalKind::kLocalFlip;
      warm.n_samples = 4000;
      const SampleResult batch = mh_sample(params, warm);
      const auto& o = spec.optimizer;
      proposal = TrotterProposal::build(
          fit_surrogate(params, batch.samples.configs, o.surrogate_tau, o.surrogate_gamma,
                        o.surrogate_n_trot)
              .surrogate);
    }
    SampleResult r = mh_sample(params, c, proposal ? &*proposal : nullptr);
    r.diagnostics.tv_distance = tv_distance(r.samples, exact);
    out.push_back(r.diagnostics);
  }
  return out;
}

}  // namespace rbmaxent
