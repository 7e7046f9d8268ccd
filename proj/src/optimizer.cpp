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

#include "rbmaxent/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <set>

namespace rbmaxent {

// ------------------------------------------------------------------ configs

void validate(const ConstraintSet& c, const Partition& partition) {
  require(!c.entries.empty(), ErrorKind::kValidation, "constraint set is empty");
  std::set<std::string> ids;
  for (const auto& e : c.entries) {
    check_system_observable(e.obs, partition);
    require(ids.insert(e.obs.identifier()).second, ErrorKind::kValidation,
            "duplicate constraint observable " + e.obs.identifier());
    require(std::isfinite(e.target) && e.target >= -1.0 && e.target <= 1.0,
            ErrorKind::kValidation, "constraint target must lie in [-1, 1]");
    require(e.xi > 0, ErrorKind::kValidation, "penalty weight must be positive");
  }
}

Real XiSchedule::at(int epoch, Real base) const {
  const int blocks = block > 0 ? epoch / block : 0;
  return std::min(xi_max, base * std::pow(growth, blocks));
}

void validate(const XiSchedule& s) {
  require(s.xi_init > 0 && s.xi_init <= s.xi_max, ErrorKind::kValidation,
          "xi schedule needs 0 < xi_init <= xi_max");
  require(s.growth >= 1.0 && s.block >= 1, ErrorKind::kValidation,
          "xi schedule needs growth >= 1 and block >= 1");
}

void validate(const OptimizerConfig& c) {
  require(c.epochs >= 1 && c.samples_per_epoch >= 1, ErrorKind::kValidation,
          "optimizer counts must be positive");
  require(c.learning_rate > 0, ErrorKind::kValidation,
          "learning rate must be positive");
  require(c.lr_final >= 0 && c.lr_final <= c.learning_rate, ErrorKind::kValidation,
          "lr_final must lie in [0, learning_rate]");
  require(c.vne_cutoff >= 2, ErrorKind::kValidation, "VNE cutoff must be >= 2");
  require(c.grad_clip > 0, ErrorKind::kValidation, "gradient clip must be positive");
}

Real cost(Real entropy_bits, std::span<const Real> residuals,
          std::span<const Real> xis) {
  require(residuals.size() == xis.size(), ErrorKind::kValidation,
          "residual / xi count mismatch");
  Real c = -entropy_bits;
  for (std::size_t i = 0; i < residuals.size(); ++i)
    c += xis[i] * residuals[i] * residuals[i];
  return c;
}

// ------------------------------------------------------- observable gradient

VectorXr grad_observable_term(const RbmParams& params, const Partition& partition,
                              const PauliString& obs, const SampleSet& samples) {
  require(samples.size() > 0, ErrorKind::kValidation, "empty sample set");
  const SpinBatch& x = samples.configs;
  const VectorXc loc = local_estimators(params, partition, obs, x);
  const MatrixXc d = log_derivatives(params, x);
  const MatrixXc dp = obs.is_diagonal() ? d : log_derivatives(params, connected_configs(obs, x));
  const auto n = static_cast<Real>(x.rows());
  const MatrixXc mixed = loc.asDiagonal() * (dp + d.conjugate());
  const VectorXr first = mixed.colwise().sum().real().transpose() / n;
  const VectorXr mean_d = 2.0 * d.real().colwise().sum().transpose() / n;
  return first - mean_d * (loc.real().sum() / n);
}

VectorXr grad_observable_term_exact(const RbmParams& params,
                                    const Partition& partition,
                                    const PauliString& obs, int max_visible) {
  validate(params, partition);
  check_system_observable(obs, partition);
  const VectorXc psi = amplitude_table(params, max_visible);
  const SpinBatch configs = all_configs(params.n_visible());
  const MatrixXc d = log_derivatives(params, configs);
  const PauliString full = obs.extended(partition.n_env);
  const auto dim = static_cast<std::uint64_t>(psi.size());

  const Real z = psi.squaredNorm();
  VectorXc weight(psi.size());  // |psi(v)|^2 O_loc(v)
  MatrixXc dp(psi.size(), d.cols());
  for (std::uint64_t v = 0; v < dim; ++v) {
    const auto vi = static_cast<Eigen::Index>(v);
    const auto wi = static_cast<Eigen::Index>(v ^ full.x_mask());
    weight(vi) = std::conj(psi(vi)) * full.element(v) * psi(wi);
    dp.row(vi) = d.row(wi);
  }
  const Real expect = weight.sum().real() / z;
  const VectorXr first = ((dp + d.conjugate()).transpose() * weight).real() / z;
  const VectorXr mean_d = 2.0 * d.real().transpose() * psi.cwiseAbs2() / z;
  return first - mean_d * expect;
}

// -------------------------------------------------------- entropy gradients

TracePowerGradient grad_trace_power(const RbmParams& params,
                                    const Partition& partition,
                                    std::span<const SampleSet> replicas) {
  require(replicas.size() >= 2, ErrorKind::kValidation, "need >= 2 replicas");
  std::vector<SpinBatch> batches;
  for (const auto& r : replicas) batches.push_back(r.configs);
  const VectorXc terms = replica_terms(params, partition, batches);
  const std::vector<SpinBatch> permuted = cyclic_permuted(batches, partition);
  const auto rows = terms.size();
  require(rows > 0, ErrorKind::kValidation, "empty sample set");
  const int p = parameter_count(params);
  MatrixXc logd_sum = MatrixXc::Zero(rows, p);  // sum_k conj D(u_k) + D(w_k)
  MatrixXr norm_sum = MatrixXr::Zero(rows, p);  // sum_k 2 Re D(u_k)
  for (std::size_t k = 0; k < batches.size(); ++k) {
    const MatrixXc du = log_derivatives(params, batches[k]);
    logd_sum += du.conjugate() + log_derivatives(params, permuted[k]);
    norm_sum += 2.0 * du.real();
  }
  const auto n = static_cast<Real>(rows);
  TracePowerGradient g;
  g.value = terms.real().mean();
  const VectorXr first = (logd_sum.transpose() * terms).real() / n;
  g.grad = first - g.value * norm_sum.colwise().sum().transpose() / n;
  return g;
}

TracePowerGradient grad_trace_power_exact(const RbmParams& params,
                                          const Partition& partition, int n,
                                          int max_visible) {
  require(n >= 2, ErrorKind::kValidation, "trace power order must be >= 2");
  validate(params, partition);
  const VectorXc psi = amplitude_table(params, max_visible);
  const Eigen::Index ds = Eigen::Index{1} << partition.n_sys;
  const Eigen::Index de = Eigen::Index{1} << partition.n_env;
  const MatrixXc a = psi.reshaped<Eigen::RowMajor>(ds, de);
  const MatrixXc d = log_derivatives(params, all_configs(params.n_visible()));
  const MatrixXc m = a * a.adjoint();
  const Real z = m.trace().real();
  MatrixXc m_pow = MatrixXc::Identity(ds, ds);
  for (int k = 0; k < n - 1; ++k) m_pow = m_pow * m;
  const Real tr_n = (m_pow * m).trace().real();
  const MatrixXc g = m_pow * a;
  // d Tr(M^n) = 2n Re sum conj(G) (.) D (.) A;  d Tr M = 2 Re sum conj(A) (.) D (.) A.
  const VectorXc wg = (g.conjugate().cwiseProduct(a)).reshaped<Eigen::RowMajor>();
  const VectorXc wa = a.cwiseAbs2().cast<Complex>().reshaped<Eigen::RowMajor>();
  const VectorXr dtr = 2.0 * n * (d.transpose() * wg).real();
  const VectorXr dz = 2.0 * (d.transpose() * wa).real();
  TracePowerGradient out;
  out.value = tr_n / std::pow(z, n);
  out.grad = dtr / std::pow(z, n) - n * out.value * dz / z;
  return out;
}

namespace {

EntropyGradient entropy_from_swap(Real swap, const VectorXr& dswap) {
  if (!(swap > 0))
    throw Error(ErrorKind::kEstimation,
                "non-positive <SWAP> estimate; increase the sample count");
  EntropyGradient e;
  e.swap = swap;
  e.entropy_bits = -std::log2(std::min<Real>(swap, 1.0));
  e.grad_bits = -dswap / (swap * kLn2);
  return e;
}

}  // namespace

EntropyGradient grad_entropy_term(const RbmParams& params,
                                  const Partition& partition, const SampleSet& u,
                                  const SampleSet& v) {
  const SampleSet pair[2] = {u, v};
  const TracePowerGradient g = grad_trace_power(params, partition, pair);
  return entropy_from_swap(g.value, g.grad);
}

EntropyGradient grad_entropy_term_exact(const RbmParams& params,
                                        const Partition& partition,
                                        int max_visible) {
  validate(params, partition);
  const VectorXc psi = amplitude_table(params, max_visible);
  const MatrixXc d = log_derivatives(params, all_configs(params.n_visible()));
  const auto dim = static_cast<std::uint64_t>(psi.size());
  const std::uint64_t de = std::uint64_t{1} << partition.n_env;
  // Sum over pairs of W = conj psi(u) conj psi(v) psi(u') psi(v') multiplying
  // conj D(u) + conj D(v) + D(u') + D(v'); collect the weights per state.
  VectorXc w_conj = VectorXc::Zero(psi.size());
  VectorXc w_plain = VectorXc::Zero(psi.size());
  Complex numer = 0;
  for (std::uint64_t u = 0; u < dim; ++u) {
    const auto ui = static_cast<Eigen::Index>(u);
    for (std::uint64_t v = 0; v < dim; ++v) {
      const auto vi = static_cast<Eigen::Index>(v);
      const auto up = static_cast<Eigen::Index>((v / de) * de + u % de);
      const auto vp = static_cast<Eigen::Index>((u / de) * de + v % de);
      const Complex w = std::conj(psi(ui)) * std::conj(psi(vi)) * psi(up) * psi(vp);
      numer += w;
      w_conj(ui) += w;
      w_conj(vi) += w;
      w_plain(up) += w;
      w_plain(vp) += w;
    }
  }
  const Real z = psi.squaredNorm();
  const Real swap = numer.real() / (z * z);
  const VectorXr first =
      (d.conjugate().transpose() * w_conj + d.transpose() * w_plain).real() / (z * z);
  const VectorXr norm = 2.0 * 2.0 * d.real().transpose() * psi.cwiseAbs2() / z;
  return entropy_from_swap(swap, first - swap * norm);
}

namespace {

VneGradient vne_from_trace_gradients(const std::vector<TracePowerGradient>& tp,
                                     int n_c) {
  const VectorXr alpha = vne_coefficients(n_c);
  VneGradient out;
  out.grad_bits = VectorXr::Zero(tp.front().grad.size());
  Real s = 0;
  for (int n = 2; n <= n_c; ++n) {
    const auto& t = tp[static_cast<std::size_t>(n - 2)];
    s -= alpha(n - 1) * (t.value - 1.0);
    out.grad_bits -= alpha(n - 1) * t.grad;
  }
  out.entropy_bits = s / kLn2;
  out.grad_bits /= kLn2;
  return out;
}

}  // namespace

VneGradient grad_vne_term(const RbmParams& params, const Partition& partition,
                          int n_c, std::span<const SampleSet> replicas) {
  require(n_c >= 2, ErrorKind::kValidation, "VNE cutoff must be >= 2");
  require(static_cast<int>(replicas.size()) >= n_c, ErrorKind::kValidation,
          "need n_c replica streams");
  std::vector<TracePowerGradient> tp;
  for (int n = 2; n <= n_c; ++n)
    tp.push_back(grad_trace_power(params, partition,
                                  replicas.subspan(0, static_cast<std::size_t>(n))));
  return vne_from_trace_gradients(tp, n_c);
}

VneGradient grad_vne_term_exact(const RbmParams& params,
                                const Partition& partition, int n_c) {
  require(n_c >= 2, ErrorKind::kValidation, "VNE cutoff must be >= 2");
  std::vector<TracePowerGradient> tp;
  for (int n = 2; n <= n_c; ++n)
    tp.push_back(grad_trace_power_exact(params, partition, n));
  return vne_from_trace_gradients(tp, n_c);
}

// ------------------------------------------------------------ exact cost

VectorXr finite_difference_gradient(const std::function<Real(const VectorXr&)>& f,
                                    const VectorXr& x, Real h) {
  require(h > 0, ErrorKind::kValidation, "finite-difference step must be positive");
  VectorXr g(x.size());
  VectorXr xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    const Real fp = f(xp);
    xp(i) = x(i) - h;
    const Real fm = f(xp);
    xp(i) = x(i);
    require(std::isfinite(fp) && std::isfinite(fm), ErrorKind::kNumerical,
            "cost is not finite at a perturbed point");
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

Real exact_cost(const RbmParams& params, const Partition& partition,
                const ConstraintSet& constraints, std::span<const Real> xis) {
  validate(constraints, partition);
  std::vector<Real> residuals;
  for (const auto& c : constraints.entries)
    residuals.push_back(estimate_observable_exact(params, partition, c.obs).value -
                        c.target);
  const Real s2 = estimate_swap_exact(params, partition).s2_bits;
  return cost(s2, residuals, xis);
}

long double exact_cost_extended(const RbmParams& params, const Partition& partition,
                                const ConstraintSet& constraints,
                                std::span<const Real> xis, int max_visible) {
  using LComplex = std::complex<long double>;
  using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
  validate(params, partition);
  validate(constraints, partition);
  require(xis.size() == constraints.size(), ErrorKind::kValidation, "xi count mismatch");
  const int nv = params.n_visible();
  require(nv <= max_visible, ErrorKind::kCapExceeded,
          "extended-precision cost requested for too many visible units");
  const auto lc = [](Complex z) { return LComplex(z.real(), z.imag()); };
  const long double beta = params.beta;

  const std::size_t dim = std::size_t{1} << nv;
  std::vector<LComplex> log_psi(dim);
  long double top = -std::numeric_limits<long double>::infinity();
  for (std::size_t v = 0; v < dim; ++v) {
    const SpinConfig sv = spins_from_index(v, nv);
    LComplex acc = 0;
    for (int k = 0; k < nv; ++k) acc += beta * lc(params.a(k)) * static_cast<long double>(sv(k));
    for (int j = 0; j < params.n_hidden(); ++j) {
      LComplex th = lc(params.b(j));
      for (int k = 0; k < nv; ++k) th += lc(params.w(k, j)) * static_cast<long double>(sv(k));
      th *= beta;
      // log(2 cosh z) = z + log(1 + exp(-2z)) after folding Re z >= 0.
      if (th.real() < 0) th = -th;
      acc += th + std::log(1.0L + std::exp(-2.0L * th));
    }
    log_psi[v] = acc;
    top = std::max(top, acc.real());
  }
  const std::size_t ds = std::size_t{1} << partition.n_sys;
  const std::size_t de = std::size_t{1} << partition.n_env;
  LMatrix rho = LMatrix::Zero(static_cast<Eigen::Index>(ds), static_cast<Eigen::Index>(ds));
  for (std::size_t a = 0; a < ds; ++a)
    for (std::size_t b = 0; b < ds; ++b) {
      LComplex acc = 0;
      for (std::size_t e = 0; e < de; ++e)
        acc += std::exp(log_psi[a * de + e] - top) *
               std::conj(std::exp(log_psi[b * de + e] - top));
      rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  rho /= rho.trace();

  long double c = std::log2((rho * rho).trace().real());  // -S2
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const PauliString& obs = constraints.entries[i].obs;
    LComplex ex = 0;
    for (std::size_t b = 0; b < ds; ++b)
      ex += rho(static_cast<Eigen::Index>(b ^ obs.x_mask()), static_cast<Eigen::Index>(b)) *
            lc(obs.element(b));
    const long double r = ex.real() - constraints.entries[i].target;
    c += xis[i] * r * r;
  }
  return c;
}

VectorXr exact_cost_gradient(const RbmParams& params, const Partition& partition,
                             const ConstraintSet& constraints,
                             std::span<const Real> xis) {
  validate(constraints, partition);
  require(xis.size() == constraints.size(), ErrorKind::kValidation,
          "xi count mismatch");
  VectorXr g = -grad_entropy_term_exact(params, partition).grad_bits;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints.entries[i];
    const Real r = estimate_observable_exact(params, partition, c.obs).value - c.target;
    g += 2.0 * xis[i] * r * grad_observable_term_exact(params, partition, c.obs);
  }
  return g;
}

// ---------------------------------------------------------------- training

namespace {

std::uint64_t epoch_seed(std::uint64_t sampler_seed, std::uint64_t opt_seed, int epoch) {
  return splitmix64(sampler_seed ^ splitmix64(opt_seed + static_cast<std::uint64_t>(epoch)));
}

}  // namespace

TrainResult train(const RbmParams& initial, const Partition& partition,
                  const ConstraintSet& constraints, const XiSchedule& schedule,
                  const OptimizerConfig& opt, const SamplerConfig& sampler) {
  validate(initial, partition);
  validate(constraints, partition);
  validate(schedule);
  validate(opt);
  validate(sampler);

  TrainResult result;
  result.params = initial;
  RbmParams& params = result.params;
  const int nv = params.n_visible();
  const int m = params.n_hidden();
  VectorXr x = pack_parameters(params);
  VectorXr mom1 = VectorXr::Zero(x.size());
  VectorXr mom2 = VectorXr::Zero(x.size());
  constexpr Real kB1 = 0.9, kB2 = 0.999, kEps = 1e-8;

  const int vne_epochs =
      opt.entropy_mode == EntropyMode::kRenyi2ThenVne
          ? std::max(1, static_cast<int>(std::ceil(0.1 * opt.epochs)))
          : 0;
  Real last_entropy = 0;
  const std::size_t k = constraints.size();

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    TrainingRecord rec;
    rec.epoch = epoch + 1;
    for (const auto& c : constraints.entries)
      rec.xi_values.push_back(schedule.at(epoch, c.xi));
    const bool vne_phase = epoch >= opt.epochs - vne_epochs;
    rec.entropy_kind = vne_phase ? "vne_poly" : "renyi2";

    std::vector<Real> expect(k);
    std::vector<VectorXr> grad_obs(k);
    VectorXr grad_s = VectorXr::Zero(x.size());
    Real entropy = last_entropy;
    try {
      if (opt.estimation == EstimationMode::kExactSum) {
        for (std::size_t i = 0; i < k; ++i) {
          const auto& obs = constraints.entries[i].obs;
          expect[i] = estimate_observable_exact(params, partition, obs).value;
          grad_obs[i] = grad_observable_term_exact(params, partition, obs);
        }
        try {
          if (vne_phase) {
            const VneGradient g = grad_vne_term_exact(params, partition, opt.vne_cutoff);
            entropy = g.entropy_bits;
            grad_s = g.grad_bits;
          } else {
            const EntropyGradient g = grad_entropy_term_exact(params, partition);
            entropy = g.entropy_bits;
            grad_s = g.grad_bits;
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kEstimation) throw;
          ++rec.estimation_failures;
        }
      } else {
        SamplerConfig sc = sampler;
        sc.n_samples = opt.samples_per_epoch;
        sc.seed = epoch_seed(sampler.seed, opt.seed, epoch);
        std::optional<TrotterProposal> proposal;
        if (sc.proposal == ProposalKind::kSurrogateTrotter) {
          SamplerConfig warm = sc;
          warm.proposal = ProposalKind::kLocalFlip;
          warm.n_samples = std::min(512, opt.samples_per_epoch);
          warm.seed = splitmix64(sc.seed ^ 0x5a17e5a17e5ULL);
          const SampleResult batch = mh_sample(params, warm);
          const SurrogateFit fit =
              fit_surrogate(params, batch.samples.configs, opt.surrogate_tau,
                            opt.surrogate_gamma, opt.surrogate_n_trot);
          proposal = TrotterProposal::build(fit.surrogate);
        }
        const int n_rep = vne_phase ? std::max(2, opt.vne_cutoff) : 2;
        const std::vector<SampleResult> reps = sample_replicas(
            params, sc, n_rep, proposal ? &*proposal : nullptr);
        Real acc = 0;
        std::vector<SampleSet> sets;
        for (const auto& r : reps) {
          acc += r.diagnostics.acceptance_rate;
          sets.push_back(r.samples);
        }
        rec.acceptance_rate = acc / static_cast<Real>(reps.size());
        for (std::size_t i = 0; i < k; ++i) {
          const auto& obs = constraints.entries[i].obs;
          expect[i] = estimate_observable(params, partition, obs, sets[0]).value;
          grad_obs[i] = grad_observable_term(params, partition, obs, sets[0]);
        }
        try {
          if (vne_phase) {
            const VneGradient g = grad_vne_term(params, partition, opt.vne_cutoff, sets);
            entropy = g.entropy_bits;
            grad_s = g.grad_bits;
          } else {
            const EntropyGradient g = grad_entropy_term(params, partition, sets[0], sets[1]);
            entropy = g.entropy_bits;
            grad_s = g.grad_bits;
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kEstimation) throw;
          ++rec.estimation_failures;
        }
      }
    } catch (const Error& e) {
      result.ok = false;
      result.status = std::string("halted at epoch ") + std::to_string(epoch + 1) +
                      ": " + e.what();
      break;
    }
    last_entropy = entropy;

    VectorXr grad = -grad_s;
    for (std::size_t i = 0; i < k; ++i) {
      const Real r = expect[i] - constraints.entries[i].target;
      rec.residuals.push_back(r);
      grad += 2.0 * rec.xi_values[i] * r * grad_obs[i];
    }
    rec.entropy_bits = entropy;
    rec.cost = cost(entropy, rec.residuals, rec.xi_values);
    rec.grad_norm = grad.norm();
    // The norm can overflow even when every entry is finite.
    if (!std::isfinite(rec.cost) || !std::isfinite(rec.grad_norm)) {
      result.ok = false;
      result.status = "diverged at epoch " + std::to_string(epoch + 1) +
                      ": non-finite cost or gradient";
      break;
    }
    if (rec.grad_norm > opt.grad_clip) grad *= opt.grad_clip / rec.grad_norm;

    Real lr = opt.learning_rate;
    if (opt.lr_final > 0 && opt.epochs > 1)
      lr *= std::pow(opt.lr_final / opt.learning_rate,
                     static_cast<Real>(epoch) / (opt.epochs - 1));
    if (opt.method == UpdateMethod::kAdaptiveMoment) {
      mom1 = kB1 * mom1 + (1 - kB1) * grad;
      mom2 = kB2 * mom2 + (1 - kB2) * grad.cwiseAbs2();
      const Real c1 = 1 - std::pow(kB1, epoch + 1);
      const Real c2 = 1 - std::pow(kB2, epoch + 1);
      x.array() -= lr * (mom1.array() / c1) /
                   ((mom2.array() / c2).sqrt() + kEps);
    } else {
      x -= lr * grad;
    }
    params = unpack_parameters(x, nv, m, params.beta);
    rec.clip_events = clip_parameters(params);
    if (rec.clip_events > 0) x = pack_parameters(params);
    result.trace.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace rbmaxent
