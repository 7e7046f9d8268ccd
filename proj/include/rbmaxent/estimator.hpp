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

// Sampling estimators over RBM sample streams, each with an exact-summation
// twin that enumerates the full visible register.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbmaxent/common.hpp"
#include "rbmaxent/dense.hpp"
#include "rbmaxent/rbm.hpp"
#include "rbmaxent/sampler.hpp"

namespace rbmaxent {

enum class EstimationMode { kSampled, kExactSum };

const char* to_string(EstimationMode mode);

struct EstimateResult {
  Real value = 0;
  Real std_error = 0;  ///< 0 in exact-sum mode
  std::int64_t n_samples = 0;
  EstimationMode mode = EstimationMode::kSampled;
  Real imag_part = 0;  ///< mean imaginary component, should vanish
  Real autocorr_time = 1;
};

/// Throws kValidation unless `obs` has n_sys letters.
void check_system_observable(const PauliString& obs, const Partition& partition);

/// O_loc(v) = sum_v' O(v, v') psi(v') / psi(v); O acts as `obs` on the system
/// block and as identity on the environment. Exactly one v' contributes.
Complex local_estimator(const RbmParams& params, const Partition& partition,
                        const PauliString& obs, const SpinConfig& v);
VectorXc local_estimators(const RbmParams& params, const Partition& partition,
                          const PauliString& obs, const SpinBatch& configs);

/// Flips the X/Y support of `obs` on every row (system block only).
SpinBatch connected_configs(const PauliString& obs, const SpinBatch& configs);
/// O(v, v') for the connected v' of every row.
VectorXc pauli_row_elements(const PauliString& obs, const SpinBatch& configs);

EstimateResult estimate_observable(const RbmParams& params,
                                   const Partition& partition,
                                   const PauliString& obs,
                                   const SampleSet& samples);
EstimateResult estimate_observable_exact(const RbmParams& params,
                                         const Partition& partition,
                                         const PauliString& obs,
                                         int max_visible = kDefaultDenseCap);

/// Configurations w_k that take the system block of u_{k+1 mod n} and the
/// environment block of u_k. For n = 2 this is the SWAP of the system block.
std::vector<SpinBatch> cyclic_permuted(std::span<const SpinBatch> replicas,
                                       const Partition& partition);

/// Per-tuple replica terms prod_k psi(w_k) / psi(u_k).
VectorXc replica_terms(const RbmParams& params, const Partition& partition,
                       std::span<const SpinBatch> replicas);

/// Estimate of Tr(rho_sys^n) from n replica streams of equal length.
EstimateResult estimate_renyi_n(const RbmParams& params, const Partition& partition,
                                int n, std::span<const SampleSet> replicas);
/// Exact Tr(rho_sys^n) by enumerating all n-tuples of basis states.
EstimateResult estimate_renyi_n_exact(const RbmParams& params,
                                      const Partition& partition, int n,
                                      int max_tuple_bits = 26);

struct SwapEstimate {
  EstimateResult swap;  ///< <SWAP_sys> = Tr(rho_sys^2)
  Real s2_bits = 0;
  Real s2_std_error = 0;
  bool clipped = false;  ///< estimate exceeded 1 and was clipped
};

/// Throws kEstimation when the (real part of the) estimate is not positive.
SwapEstimate estimate_swap(const RbmParams& params, const Partition& partition,
                           const SampleSet& u, const SampleSet& v);
SwapEstimate estimate_swap_exact(const RbmParams& params,
                                 const Partition& partition,
                                 int max_visible = 13);

/// Converts a purity / SWAP estimate into S2 in bits with the clipping rules.
SwapEstimate swap_to_s2(const EstimateResult& swap);

/// Coefficients alpha_1..alpha_nc (index 0 holds alpha_1) of the polynomial
/// p(x) = sum_n alpha_n x^n ~ x ln x. p(0) = p(1) = 0 hold exactly; the
/// remaining freedom is a least-squares fit at Chebyshev nodes of
/// [spectral_floor, 1]. Cached per (n_c, floor).
VectorXr vne_coefficients(int n_c, Real spectral_floor = 0.0);

/// Von Neumann entropy in bits from Tr rho^2 .. Tr rho^n_c (Tr rho = 1).
/// `spectral_floor` is an optional known lower bound on the nonzero spectrum.
Real vne_from_powers(std::span<const Real> tr_powers, int n_c,
                     Real spectral_floor = 0.0);

/// ceil(variance / epsilon^2), at least 1.
std::int64_t required_samples(Real variance, Real epsilon);

/// Mean, autocorrelation-corrected standard error of a chain-segmented series.
EstimateResult summarize_series(const VectorXr& series, int n_chains,
                                Real imag_mean = 0.0);

}  // namespace rbmaxent
