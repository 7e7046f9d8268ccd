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

// Metropolis-Hastings sampling of |psi|^2 with local-flip, uniform and
// surrogate-Trotter proposals. The surrogate proposal is the classical
// simulation of a Trotterized Ising + transverse-field evolution whose
// Ising part is fitted to the current RBM distribution.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbmaxent/common.hpp"
#include "rbmaxent/rbm.hpp"

namespace rbmaxent {

inline constexpr int kDefaultTrotterCap = 12;

struct SurrogateParams {
  VectorXr fields;     ///< l_i
  MatrixXr couplings;  ///< J_ij, symmetric, zero diagonal; pairs i<j counted once
  Real tau = 2.0;
  Real gamma = 0.6;
  int n_trot = 8;

  int size() const { return static_cast<int>(fields.size()); }
};

void validate(const SurrogateParams& s);

/// Ising energy sum_i l_i s_i + sum_{i<j} J_ij s_i s_j for every basis state.
VectorXr surrogate_energies(const SurrogateParams& s);

struct SurrogateFit {
  SurrogateParams surrogate;
  Real residual = 0;           ///< || X c - log|psi|^2 ||_2 over the batch
  bool ridge_fallback = false;  ///< feature matrix was rank deficient
};

/// Least-squares fit of log|psi(s)|^2 ~ c + l.s + sum_{i<j} J_ij s_i s_j.
SurrogateFit fit_surrogate(const RbmParams& params, const SpinBatch& fit_batch,
                           Real tau, Real gamma, int n_trot);

/// Feature matrix [1, s_i, s_i s_j (i<j)] used by fit_surrogate.
MatrixXr surrogate_features(const SpinBatch& configs);

/// (exp(-i gamma H tau/n) exp(-i (1-gamma) H_x tau/n))^n, H_x = sum_i X_i.
MatrixXc trotter_unitary(const SurrogateParams& s,
                         int max_qubits = kDefaultTrotterCap);

/// Row-stochastic q(v'|v) = |<v'|U|v>|^2; row v holds the proposal from v.
MatrixXr trotter_proposal_matrix(const SurrogateParams& s,
                                 int max_qubits = kDefaultTrotterCap);

/// Proposal matrix plus per-row cumulative sums for inverse-CDF draws.
struct TrotterProposal {
  MatrixXr q;
  MatrixXr cdf;
  static TrotterProposal build(const SurrogateParams& s,
                               int max_qubits = kDefaultTrotterCap);
};

enum class ProposalKind { kLocalFlip, kUniform, kSurrogateTrotter };

const char* to_string(ProposalKind kind);
ProposalKind proposal_from_string(const std::string& name);

struct SamplerConfig {
  int n_samples = 1000;  ///< kept samples, split evenly over chains (rounded up)
  int burn_in = 200;
  int thinning = 1;
  int n_chains = 4;
  std::uint64_t seed = 1;
  ProposalKind proposal = ProposalKind::kLocalFlip;
};

void validate(const SamplerConfig& c);

/// Kept configurations, chain after chain, each chain `chain_length` rows.
struct SampleSet {
  SpinBatch configs;
  int n_chains = 1;
  int chain_length = 0;
  int size() const { return static_cast<int>(configs.rows()); }
};

struct SamplerDiagnostics {
  ProposalKind proposal = ProposalKind::kLocalFlip;
  Real acceptance_rate = 0;
  Real autocorr_time = 1;  ///< of the log|psi|^2 series
  std::optional<Real> tv_distance;
  int n_samples = 0;
  std::uint64_t seed = 0;
};

struct SampleResult {
  SampleSet samples;
  SamplerDiagnostics diagnostics;
};

/// Metropolis-Hastings chains targeting |psi|^2. `proposal` must be given
/// exactly when config.proposal is kSurrogateTrotter.
SampleResult mh_sample(const RbmParams& params, const SamplerConfig& config,
                       const TrotterProposal* proposal = nullptr);
SampleResult mh_sample(const RbmParams& params, const SamplerConfig& config,
                       const std::optional<SurrogateParams>& surrogate);

/// Seed of replica r: splitmix64(seed ^ r).
std::uint64_t replica_seed(std::uint64_t seed, int replica);

/// k independently seeded sample streams of equal length.
std::vector<SampleResult> sample_replicas(const RbmParams& params,
                                          const SamplerConfig& config, int k,
                                          const TrotterProposal* proposal = nullptr);

/// Exact Metropolis-Hastings transition matrix over all 2^n_v states.
MatrixXr mh_transition_matrix(const RbmParams& params, ProposalKind kind,
                              const TrotterProposal* proposal = nullptr,
                              int max_visible = 10);

/// Normalized |psi|^2 over all basis states.
VectorXr exact_distribution(const RbmParams& params,
                            int max_visible = kDefaultDenseCap);

/// 0.5 * sum |empirical - exact| over basis states.
Real tv_distance(const SampleSet& samples, const VectorXr& exact);

/// Integrated autocorrelation time 1 + 2 sum_t rho(t) with Sokal's automatic
/// window (smallest W with W >= c * tau(W)). The series is split into
/// `n_chains` equal segments whose autocovariances are averaged.
Real integrated_autocorr_time(std::span<const Real> series, int n_chains = 1,
                              Real window_c = 5.0);

}  // namespace rbmaxent
