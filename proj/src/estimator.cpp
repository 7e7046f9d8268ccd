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

#include "rbmaxent/estimator.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include <Eigen/SVD>

namespace rbmaxent {

const char* to_string(EstimationMode mode) {
  return mode == EstimationMode::kSampled ? "sampled" : "exact_sum";
}

void check_system_observable(const PauliString& obs, const Partition& partition) {
  require(obs.size() == partition.n_sys, ErrorKind::kValidation,
          "observable '" + obs.identifier() +
              "' must act on exactly the system qubits");
}

SpinBatch connected_configs(const PauliString& obs, const SpinBatch& configs) {
  SpinBatch out = configs;
  for (int k = 0; k < obs.size(); ++k)
    if (obs[k] == 'X' || obs[k] == 'Y') out.col(k) *= -1.0;
  return out;
}

VectorXc pauli_row_elements(const PauliString& obs, const SpinBatch& configs) {
  // Row spin s_k: Z -> s_k, Y -> -i s_k, X -> 1.
  static constexpr Complex kMinusIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  VectorXr sign = VectorXr::Ones(configs.rows());
  for (int k = 0; k < obs.size(); ++k)
    if (obs[k] == 'Z' || obs[k] == 'Y') sign.array() *= configs.col(k).array();
  return kMinusIPow[obs.y_count() & 3] * sign.cast<Complex>();
}

VectorXc local_estimators(const RbmParams& params, const Partition& partition,
                          const PauliString& obs, const SpinBatch& configs) {
  validate(params, partition);
  check_system_observable(obs, partition);
  require(configs.cols() == params.n_visible(), ErrorKind::kValidation,
          "configuration width does not match visible unit count");
  const VectorXc elem = pauli_row_elements(obs, configs);
  if (obs.is_diagonal()) return elem;
  const VectorXc lp = log_amplitudes(params, configs);
  const VectorXc lq = log_amplitudes(params, connected_configs(obs, configs));
  VectorXc out = elem.cwiseProduct((lq - lp).array().exp().matrix());
  require(out.allFinite(), ErrorKind::kNumerical, "local estimator overflowed");
  return out;
}

Complex local_estimator(const RbmParams& params, const Partition& partition,
                        const PauliString& obs, const SpinConfig& v) {
  require(v.size() == params.n_visible(), ErrorKind::kValidation,
          "configuration length does not match visible unit count");
  return local_estimators(params, partition, obs, v.transpose())(0);
}

EstimateResult summarize_series(const VectorXr& series, int n_chains,
                                Real imag_mean) {
  require(series.size() > 0, ErrorKind::kValidation, "empty sample set");
  EstimateResult r;
  r.mode = EstimationMode::kSampled;
  r.n_samples = series.size();
  r.value = series.mean();
  r.imag_part = imag_mean;
  if (series.size() < 2) return r;
  const Real var = (series.array() - r.value).square().sum() /
                   static_cast<Real>(series.size() - 1);
  r.autocorr_time = integrated_autocorr_time(
      std::span<const Real>(series.data(), static_cast<std::size_t>(series.size())),
      n_chains);
  r.std_error = std::sqrt(var * r.autocorr_time / static_cast<Real>(series.size()));
  return r;
}

EstimateResult estimate_observable(const RbmParams& params,
                                   const Partition& partition,
                                   const PauliString& obs,
                                   const SampleSet& samples) {
  require(samples.size() > 0, ErrorKind::kValidation, "empty sample set");
  const VectorXc loc = local_estimators(params, partition, obs, samples.configs);
  return summarize_series(loc.real(), samples.n_chains, loc.imag().mean());
}

EstimateResult estimate_observable_exact(const RbmParams& params,
                                         const Partition& partition,
                                         const PauliString& obs,
                                         int max_visible) {
  validate(params, partition);
  check_system_observable(obs, partition);
  const VectorXc psi = amplitude_table(params, max_visible);
  const int nv = params.n_visible();
  const PauliString full = obs.extended(partition.n_env);
  const std::uint64_t flip = full.x_mask();
  Complex num = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << nv); ++v) {
    // |psi(v)|^2 O_loc(v) = conj(psi(v)) O(v, v') psi(v').
    num += std::conj(psi(static_cast<Eigen::Index>(v))) * full.element(v) *
           psi(static_cast<Eigen::Index>(v ^ flip));
  }
  EstimateResult r;
  r.mode = EstimationMode::kExactSum;
  const Real z = psi.squaredNorm();
  r.value = num.real() / z;
  r.imag_part = num.imag() / z;
  r.n_samples = std::int64_t{1} << nv;
  return r;
}

// ------------------------------------------------------------------ replicas

std::vector<SpinBatch> cyclic_permuted(std::span<const SpinBatch> replicas,
                                       const Partition& partition) {
  const auto n = replicas.size();
  std::vector<SpinBatch> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = replicas[k];
    out[k].leftCols(partition.n_sys) = replicas[(k + 1) % n].leftCols(partition.n_sys);
  }
  return out;
}

VectorXc replica_terms(const RbmParams& params, const Partition& partition,
                       std::span<const SpinBatch> replicas) {
  validate(params, partition);
  require(replicas.size() >= 2, ErrorKind::kValidation, "need >= 2 replicas");
  const auto rows = replicas.front().rows();
  for (const auto& r : replicas)
    require(r.rows() == rows && r.cols() == params.n_visible(),
            ErrorKind::kValidation, "replica streams must have equal shapes");
  const std::vector<SpinBatch> permuted = cyclic_permuted(replicas, partition);
  VectorXc log_term = VectorXc::Zero(rows);
  for (std::size_t k = 0; k < replicas.size(); ++k)
    log_term += log_amplitudes(params, permuted[k]) - log_amplitudes(params, replicas[k]);
  VectorXc out = log_term.array().exp().matrix();
  require(out.allFinite(), ErrorKind::kNumerical, "replica term overflowed");
  return out;
}

EstimateResult estimate_renyi_n(const RbmParams& params, const Partition& partition,
                                int n, std::span<const SampleSet> replicas) {
  require(n >= 2, ErrorKind::kValidation, "Renyi order must be >= 2");
  require(static_cast<int>(replicas.size()) == n, ErrorKind::kValidation,
          "need exactly n replica streams");
  std::vector<SpinBatch> batches;
  for (const auto& r : replicas) {
    require(r.size() > 0, ErrorKind::kValidation, "empty sample set");
    batches.push_back(r.configs);
  }
  const VectorXc terms = replica_terms(params, partition, batches);
  return summarize_series(terms.real(), replicas.front().n_chains,
                          terms.imag().mean());
}

EstimateResult estimate_renyi_n_exact(const RbmParams& params,
                                      const Partition& partition, int n,
                                      int max_tuple_bits) {
  require(n >= 2, ErrorKind::kValidation, "Renyi order must be >= 2");
  validate(params, partition);
  const int nv = params.n_visible();
  require(n * nv <= max_tuple_bits, ErrorKind::kCapExceeded,
          "replica enumeration too large for exact summation");
  const VectorXc psi = amplitude_table(params, nv);
  const std::uint64_t de = std::uint64_t{1} << partition.n_env;
  const std::uint64_t dim = std::uint64_t{1} << nv;
  std::vector<std::uint64_t> u(static_cast<std::size_t>(n), 0);
  Complex acc = 0;
  const auto at = [&](std::uint64_t i) { return psi(static_cast<Eigen::Index>(i)); };
  while (true) {
    Complex term = 1.0;
    for (int k = 0; k < n; ++k) {
      const std::uint64_t uk = u[static_cast<std::size_t>(k)];
      const std::uint64_t next = u[static_cast<std::size_t>((k + 1) % n)];
      const std::uint64_t wk = (next / de) * de + (uk % de);
      term *= std::conj(at(uk)) * at(wk);
    }
    acc += term;
    int pos = 0;
    while (pos < n && ++u[static_cast<std::size_t>(pos)] == dim) u[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
  const Real z = psi.squaredNorm();
  EstimateResult r;
  r.mode = EstimationMode::kExactSum;
  r.value = acc.real() / std::pow(z, n);
  r.imag_part = acc.imag() / std::pow(z, n);
  r.n_samples = static_cast<std::int64_t>(std::pow(2.0, n * nv));
  return r;
}

SwapEstimate swap_to_s2(const EstimateResult& swap) {
  SwapEstimate out;
  out.swap = swap;
  if (!(swap.value > 0))
    throw Error(ErrorKind::kEstimation,
                "non-positive <SWAP> estimate; increase the sample count");
  Real value = swap.value;
  if (value > 1.0) {
    value = 1.0;
    out.clipped = true;
  }
  out.s2_bits = -std::log2(value);
  out.s2_std_error = swap.std_error / (value * kLn2);
  return out;
}

SwapEstimate estimate_swap(const RbmParams& params, const Partition& partition,
                           const SampleSet& u, const SampleSet& v) {
  const SampleSet pair[2] = {u, v};
  return swap_to_s2(estimate_renyi_n(params, partition, 2, pair));
}

SwapEstimate estimate_swap_exact(const RbmParams& params,
                                 const Partition& partition, int max_visible) {
  return swap_to_s2(estimate_renyi_n_exact(params, partition, 2, 2 * max_visible));
}

// ------------------------------------------------------------- VNE polynomial

VectorXr vne_coefficients(int n_c, Real spectral_floor) {
  require(n_c >= 2, ErrorKind::kValidation, "VNE cutoff must be >= 2");
  require(spectral_floor >= 0 && spectral_floor < 1, ErrorKind::kValidation,
          "spectral floor must lie in [0, 1)");
  static std::mutex mu;
  static std::map<std::pair<int, Real>, VectorXr> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(n_c, spectral_floor);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  // p(x) = sum_{n>=2} c_n (x^n - x) vanishes at 0 and 1 by construction.
  constexpr int kNodes = 2000;
  MatrixXr basis(kNodes, n_c - 1);
  VectorXr target(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    const Real t = 0.5 * (1.0 - std::cos(M_PI * (i + 0.5) / kNodes));
    const Real x = spectral_floor + (1.0 - spectral_floor) * t;
    for (int n = 2; n <= n_c; ++n) basis(i, n - 2) = std::pow(x, n) - x;
    target(i) = x * std::log(x);
  }
  const VectorXr c = basis.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
  VectorXr alpha(n_c);
  alpha(0) = -c.sum();
  alpha.tail(n_c - 1) = c;
  cache.emplace(key, alpha);
  return alpha;
}

Real vne_from_powers(std::span<const Real> tr_powers, int n_c, Real spectral_floor) {
  require(n_c >= 2, ErrorKind::kValidation, "VNE cutoff must be >= 2");
  require(static_cast<int>(tr_powers.size()) == n_c - 1, ErrorKind::kValidation,
          "need Tr rho^2 .. Tr rho^n_c");
  for (Real t : tr_powers)
    require(t > 0 && t <= 1.0 + 1e-9, ErrorKind::kValidation,
            "trace powers must lie in (0, 1]");
  const VectorXr alpha = vne_coefficients(n_c, spectral_floor);
  // With alpha_1 = -sum_{n>=2} alpha_n, -sum_n alpha_n Tr rho^n becomes
  // -sum_{n>=2} alpha_n (Tr rho^n - 1), which is exactly 0 for pure states.
  Real s = 0;
  for (int n = 2; n <= n_c; ++n) s -= alpha(n - 1) * (tr_powers[static_cast<std::size_t>(n - 2)] - 1.0);
  return s / kLn2;
}

std::int64_t required_samples(Real variance, Real epsilon) {
  require(epsilon > 0, ErrorKind::kValidation, "epsilon must be positive");
  require(variance >= 0, ErrorKind::kValidation, "variance must be >= 0");
  const Real ratio = variance / (epsilon * epsilon);
  const Real n = std::ceil(ratio - 1e-9 * std::max<Real>(1.0, ratio));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

}  // namespace rbmaxent
