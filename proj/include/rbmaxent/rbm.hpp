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

// Complex-parameter RBM over visible units split into system + environment.
//
//   psi(s) = exp(beta * a.s) * prod_j 2 cosh(beta * (b_j + sum_i W_ij s_i))
//
// Amplitudes are never normalized; every consumer works with ratios or
// divides by an explicit trace. Visible unit order is the system block
// followed by the environment block, so basis indices factor as
// index = sys_index * 2^n_env + env_index.

#pragma once

#include <random>

#include "rbmaxent/common.hpp"

namespace rbmaxent {

/// Bound on |Re| and |Im| of every parameter entry.
inline constexpr Real kParamMagnitudeLimit = 30.0;

struct RbmParams {
  VectorXc a;  ///< visible biases, length n_v
  VectorXc b;  ///< hidden biases, length m
  MatrixXc w;  ///< couplings, n_v x m
  Real beta = 1.0;

  int n_visible() const { return static_cast<int>(a.size()); }
  int n_hidden() const { return static_cast<int>(b.size()); }

  static RbmParams zeros(int n_visible, int n_hidden);
  /// Complex Gaussian entries, `stddev` per real coordinate.
  static RbmParams random(int n_visible, int n_hidden, Real stddev,
                          std::mt19937_64& rng);
};

struct Partition {
  int n_sys = 1;
  int n_env = 0;
  int n_visible() const { return n_sys + n_env; }
};

/// Throws kValidation on shape mismatch, non-finite entries, beta <= 0 or an
/// entry beyond kParamMagnitudeLimit.
void validate(const RbmParams& params);
void validate(const RbmParams& params, const Partition& partition);

/// log(2 cosh z), stable for large |Re z|.
Complex log_2cosh(Complex z);

/// Hidden-unit angles beta * (b + W^T s) for each row of `configs` (N x m).
MatrixXc hidden_angles(const RbmParams& params, const SpinBatch& configs);

/// Unnormalized log psi(s). Throws kNumerical if the result is not finite.
Complex log_amplitude(const RbmParams& params, const SpinConfig& config);
/// Row-wise log psi over a batch of configurations (no validation of spins).
VectorXc log_amplitudes(const RbmParams& params, const SpinBatch& configs);

/// psi(num) / psi(den); exactly 1 when the configurations are identical.
Complex amplitude_ratio(const RbmParams& params, const SpinConfig& num,
                        const SpinConfig& den);

/// psi over all 2^n_v basis states, rescaled so that max |psi| = 1.
VectorXc amplitude_table(const RbmParams& params,
                         int max_visible = kDefaultDenseCap);

/// Reduced system density matrix rho(s, s') = sum_e psi(s,e) psi*(s',e),
/// normalized to unit trace.
MatrixXc exact_density_matrix(const RbmParams& params, const Partition& partition,
                              int max_visible = kDefaultDenseCap);

// --------------------------------------------------------------- parameters

/// 2 (n_v + m + n_v m): Re a, Im a, Re b, Im b, Re W, Im W (W row-major).
int parameter_count(int n_visible, int n_hidden);
inline int parameter_count(const RbmParams& p) {
  return parameter_count(p.n_visible(), p.n_hidden());
}

VectorXr pack_parameters(const RbmParams& params);
RbmParams unpack_parameters(const VectorXr& packed, int n_visible, int n_hidden,
                            Real beta = 1.0);

enum class ParamFamily { kReA, kImA, kReB, kImB, kReW, kImW };

struct ParamCoord {
  ParamFamily family = ParamFamily::kReA;
  int k = 0;  ///< visible index (a, W)
  int p = 0;  ///< hidden index (b, W)
};

/// Position of `coord` in the packed vector; throws kValidation when invalid.
int packed_index(const ParamCoord& coord, int n_visible, int n_hidden);
ParamCoord coord_of(int packed, int n_visible, int n_hidden);
const char* to_string(ParamFamily family);

/// d log psi(s) / dx for every packed real coordinate x (row per config).
MatrixXc log_derivatives(const RbmParams& params, const SpinBatch& configs);

/// Entry of the logarithmic-derivative matrix D with
/// d rho(v,v') / dx = D(v,v') rho(v,v'), where rho(v,v') = psi(v) psi*(v')
/// over the full visible register: D = dlog psi(v) + conj(dlog psi(v')).
Complex d_matrix_entry(const RbmParams& params, const ParamCoord& which,
                       const SpinConfig& v, const SpinConfig& v_prime);

/// Clamps Re/Im parts into [-limit, limit]; returns how many real
/// coordinates were clipped.
int clip_parameters(RbmParams& params, Real limit = kParamMagnitudeLimit);

}  // namespace rbmaxent
