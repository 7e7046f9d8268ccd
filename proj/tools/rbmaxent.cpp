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

// Command-line front end: gen-target, train, eval, gradcheck, bench-sampler.
//
// Exit codes: 0 success, 2 validation, 3 runtime or numerical failure, 4 IO.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbmaxent/runner.hpp"

namespace {

using rbmaxent::ErrorKind;
using rbmaxent::Json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return 4;
    case ErrorKind::kValidation:
    case ErrorKind::kOutOfRange:
    case ErrorKind::kParse:
    case ErrorKind::kCapExceeded:
    case ErrorKind::kNonCommuting:
    case ErrorKind::kNonUnitary:
      return 2;
    default:
      return 3;
  }
}

struct ConfigArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

void add_config_flags(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.config, "experiment JSON file");
  cmd->add_option("-s,--set", args.overrides, "key=value override (repeatable)");
  cmd->add_option("-o,--out", args.out, "output directory");
}

rbmaxent::ExperimentSpec load_spec(const ConfigArgs& args, const std::string& name) {
  Json j = args.config.empty() ? Json::object() : rbmaxent::read_json_file(args.config);
  for (const auto& o : args.overrides) rbmaxent::apply_override(j, o);
  if (!args.out.empty()) {
    j["output_dir"] = args.out;
  } else if (!j.contains("output_dir")) {
    j["output_dir"] = (rbmaxent::default_output_root() / name).string();
  }
  return rbmaxent::spec_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MaxEnt quantum state tomography with a complex RBM"};
  app.require_subcommand(1);

  ConfigArgs gen_args, train_args, bench_args;
  auto* gen = app.add_subcommand("gen-target", "build a random-circuit target");
  add_config_flags(gen, gen_args);

  auto* trn = app.add_subcommand("train", "train an RBM against a target");
  add_config_flags(trn, train_args);
  std::string train_target;
  trn->add_option("-t,--target", train_target, "target JSON (generated when omitted)");

  auto* evl = app.add_subcommand("eval", "evaluate a checkpoint against a target");
  std::string eval_ckpt, eval_target, eval_out;
  evl->add_option("--checkpoint", eval_ckpt, "checkpoint JSON")->required();
  evl->add_option("-t,--target", eval_target, "target JSON")->required();
  evl->add_option("-o,--out", eval_out, "write report.json here");

  auto* gc = app.add_subcommand("gradcheck", "analytic vs finite-difference gradient");
  int gc_sys = 2, gc_env = 1, gc_m = 2;
  std::uint64_t gc_seed = 1;
  double gc_h = 1e-5;
  bool gc_fault = false;
  gc->add_option("--n-sys", gc_sys);
  gc->add_option("--n-env", gc_env);
  gc->add_option("--m", gc_m);
  gc->add_option("--seed", gc_seed);
  gc->add_option("--step", gc_h, "finite-difference step h");
  gc->add_flag("--inject-fault", gc_fault, "flip the entropy-gradient sign");

  auto* bench = app.add_subcommand("bench-sampler", "compare proposal kinds");
  add_config_flags(bench, bench_args);
  double bench_std = 0.5;
  bench->add_option("--param-std", bench_std, "stddev of the random RBM instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const auto spec = load_spec(gen_args, "gen-target");
      const auto target = rbmaxent::cmd_gen_target(spec);
      std::cout << rbmaxent::target_to_json(target).dump(2) << "\n";
      return 0;
    }
    if (*trn) {
      const auto spec = load_spec(train_args, "train");
      const auto target = train_target.empty()
                              ? rbmaxent::cmd_gen_target(spec, false)
                              : rbmaxent::target_from_json(
                                    rbmaxent::read_json_file(train_target));
      const auto sweep = rbmaxent::run_seed_sweep(spec, target);
      bool ok = true;
      for (const auto& r : sweep.reports) ok = ok && r.ok;
      std::cout << rbmaxent::report_to_json(sweep.reports.front()).dump(2) << "\n";
      std::cout << "outputs written to " << spec.output_dir.string() << "\n";
      return ok ? 0 : 3;
    }
    if (*evl) {
      const auto ckpt = rbmaxent::checkpoint_from_json(rbmaxent::read_json_file(eval_ckpt));
      const auto target = rbmaxent::target_from_json(rbmaxent::read_json_file(eval_target));
      const auto report = rbmaxent::cmd_eval(ckpt, target);
      const Json j = rbmaxent::report_to_json(report);
      if (!eval_out.empty()) rbmaxent::write_json_file(eval_out + "/report.json", j);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*gc) {
      const auto rep = rbmaxent::cmd_gradcheck(
          gc_sys, gc_env, gc_m, gc_seed, gc_h,
          gc_fault ? rbmaxent::GradFault::kEntropySignFlip : rbmaxent::GradFault::kNone);
      std::cout << (rep.pass ? "PASS" : "FAIL") << " max_rel_err=" << rep.max_rel_error
                << " max_abs_err=" << rep.max_abs_error
                << " worst=" << rep.worst_coordinate << " analytic=" << rep.analytic
                << " numeric=" << rep.numeric << " coordinates=" << rep.coordinates
                << "\n";
      return 0;
    }
    if (*bench) {
      const auto spec = load_spec(bench_args, "bench-sampler");
      Json out = Json::array();
      for (const auto& d : rbmaxent::cmd_bench_sampler(spec, bench_std))
        out.push_back(rbmaxent::diagnostics_to_json(d));
      rbmaxent::write_json_file(spec.output_dir / "diagnostics.json", out);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const rbmaxent::Error& e) {
    std::cerr << "error (" << rbmaxent::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
