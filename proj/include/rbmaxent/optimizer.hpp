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

// Penalty-method MaxEnt trainer:
//
//   C = -S(rho) + sum_i xi_i (<O_i> - target_i)^2
//
// with S in bits, analytic gradients from the logarithmic-derivative matrix,
// and a growing penalty schedule in place of exact Lagrange multipliers.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rbmaxent/common.hpp"
#include "rbmaxent/dense.hpp"
#include "rbmaxent/estimator.hpp"
#include "rbmaxent/rbm.hpp"
#include "rbmaxent/sampler.hpp"

namespace rbmaxent {

struct Constraint {
  PauliString obs;
  Real target = 0;
  Real xi = 0.1;  ///< initial penalty weight
};

struct ConstraintSet {
  std::vector<Constraint> entries;
  std::size_t size() const { return entries.size(); }
};

/// Nonempty, unique identifiers, targets in [-1, 1], xi > 0, system-sized.
void validate(const ConstraintSet& c, const Partition& partition);

struct XiSchedule {
  Real xi_init = 0.1;
  Real growth = 1.2;  ///< multiplicative, once per `block` epochs
  int block = 10;
  Real xi_max = 100.0;

  /// min(xi_max, base * growth^(epoch / block)).
  Real at(int epoch, Real base) const;
};

void validate(const XiSchedule& s);

enum class UpdateMethod { kPlainGradient, kAdaptiveMoment };
enum class EntropyMode { kRenyi2, kRenyi2ThenVne };

struct OptimizerConfig {
  int epochs = 600;
  Real learning_rate = 0.01;
  /// When > 0 the step size decays geometrically from learning_rate to
  /// lr_final over the run; 0 keeps it constant.
  Real lr_final = 0;
  UpdateMethod method = UpdateMethod::kAdaptiveMoment;
  int samples_per_epoch = 2000;
  EntropyMode entropy_mode = EntropyMode::kRenyi2;
  int vne_cutoff = 6;
  std::uint64_t seed = 1;
  /// kExactSum enumerates the register every epoch (small systems only).
  EstimationMode estimation = EstimationMode::kSampled;
  Real grad_clip = 10.0;
  // Surrogate-Trotter proposal settings.
  Real surrogate_tau = 2.0;
  Real surrogate_gamma = 0.6;
  int surrogate_n_trot = 8;
};

void validate(const OptimizerConfig& c);

struct TrainingRecord {
  int epoch = 0;
  Real cost = 0;
  Real entropy_bits = 0;
  std::string entropy_kind = "renyi2";
  std::vector<Real> residuals;
  std::vector<Real> xi_values;
  Real acceptance_rate = 0;
  Real grad_norm = 0;
  int clip_events = 0;
  int estimation_failures = 0;
};

struct TrainingTrace {
  std::vector<TrainingRecord> records;
};

struct TrainResult {
  RbmParams params;
  TrainingTrace trace;
  bool ok = true;
  std::string status = "ok";
};

/// -entropy_bits + sum_i xi_i residual_i^2.
Real cost(Real entropy_bits, std::span<const Real> residuals,
          std::span<const Real> xis);

/// d<O>/dx over all packed coordinates:
/// Re <D (.) O^T> - <D> <O>, from one sample set or by exact summation.
VectorXr grad_observable_term(const RbmParams& params, const Partition& partition,
                              const PauliString& obs, const SampleSet& samples);
VectorXr grad_observable_term_exact(const RbmParams& params,
                                    const Partition& partition,
                                    const PauliString& obs,
                                    int max_visible = kDefaultDenseCap);

struct TracePowerGradient {
  Real value = 0;  ///< Tr(rho_sys^n)
  VectorXr grad;   ///< d Tr(rho_sys^n) / dx
};

/// Sampled gradient of Tr(rho_sys^n) from n replica streams.
TracePowerGradient grad_trace_power(const RbmParams& params,
                                    const Partition& partition,
                                    std::span<const SampleSet> replicas);
/// Exact gradient of Tr(rho_sys^n) via the reduced-matrix contraction.
TracePowerGradient grad_trace_power_exact(const RbmParams& params,
                                          const Partition& partition, int n,
                                          int max_visible = kDefaultDenseCap);

struct EntropyGradient {
  Real swap = 0;          ///< <SWAP_sys>
  Real entropy_bits = 0;  ///< S2
  VectorXr grad_bits;     ///< dS2/dx = -d<SWAP>/dx / (<SWAP> ln 2)
};

/// Throws kEstimation if the sampled <SWAP> is not positive.
EntropyGradient grad_entropy_term(const RbmParams& params,
                                  const Partition& partition, const SampleSet& u,
                                  const SampleSet& v);
/// Exact version enumerating all (u, v) pairs.
EntropyGradient grad_entropy_term_exact(const RbmParams& params,
                                        const Partition& partition,
                                        int max_visible = 12);

struct VneGradient {
  Real entropy_bits = 0;
  VectorXr grad_bits;
};

/// Polynomial VNE estimate and gradient from n_c replica streams (sampled)
/// or from exact trace powers.
VneGradient grad_vne_term(const RbmParams& params, const Partition& partition,
                          int n_c, std::span<const SampleSet> replicas);
VneGradient grad_vne_term_exact(const RbmParams& params,
                                const Partition& partition, int n_c);

/// Central differences of `f` at `x` per coordinate. Throws kNumerical if f
/// is not finite at a perturbed point.
VectorXr finite_difference_gradient(const std::function<Real(const VectorXr&)>& f,
                                    const VectorXr& x, Real h);

/// Cost with every term evaluated by exact summation.
Real exact_cost(const RbmParams& params, const Partition& partition,
                const ConstraintSet& constraints, std::span<const Real> xis);
/// exact_cost recomputed in long double from the amplitude table. Roundoff in
/// central differences of this function sits well below the truncation error
/// at h ~ 1e-5, which a double evaluation cannot guarantee for small entries.
long double exact_cost_extended(const RbmParams& params, const Partition& partition,
                                const ConstraintSet& constraints,
                                std::span<const Real> xis, int max_visible = 12);
/// Analytic gradient of exact_cost.
VectorXr exact_cost_gradient(const RbmParams& params, const Partition& partition,
                             const ConstraintSet& constraints,
                             std::span<const Real> xis);

/// The MaxEnt training loop. Never throws for numerical failures during the
/// loop; those end training with ok = false and the partial trace.
TrainResult train(const RbmParams& initial, const Partition& partition,
                  const ConstraintSet& constraints, const XiSchedule& schedule,
                  const OptimizerConfig& opt, const SamplerConfig& sampler);

}  // namespace rbmaxent
