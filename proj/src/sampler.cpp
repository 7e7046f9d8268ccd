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

#include "rbmaxent/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rbmaxent {

// ---------------------------------------------------------------- surrogate

void validate(const SurrogateParams& s) {
  const auto n = s.fields.size();
  require(n >= 1, ErrorKind::kValidation, "surrogate needs at least one spin");
  require(s.couplings.rows() == n && s.couplings.cols() == n,
          ErrorKind::kValidation, "coupling matrix shape mismatch");
  require((s.couplings - s.couplings.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          ErrorKind::kValidation, "coupling matrix must be symmetric");
  require(s.couplings.diagonal().cwiseAbs().maxCoeff() == 0.0,
          ErrorKind::kValidation, "coupling matrix must have zero diagonal");
  require(s.tau > 0, ErrorKind::kValidation, "tau must be positive");
  require(s.gamma >= 0 && s.gamma <= 1, ErrorKind::kValidation,
          "gamma must lie in [0, 1]");
  require(s.n_trot >= 1, ErrorKind::kValidation, "n_trot must be >= 1");
}

MatrixXr surrogate_features(const SpinBatch& configs) {
  const auto n = configs.cols();
  MatrixXr x(configs.rows(), 1 + n + n * (n - 1) / 2);
  x.col(0).setOnes();
  x.middleCols(1, n) = configs;
  Eigen::Index c = 1 + n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      x.col(c++) = configs.col(i).cwiseProduct(configs.col(j));
  return x;
}

SurrogateFit fit_surrogate(const RbmParams& params, const SpinBatch& fit_batch,
                           Real tau, Real gamma, int n_trot) {
  validate(params);
  require(fit_batch.rows() > 0, ErrorKind::kValidation, "empty fit batch");
  require(fit_batch.cols() == params.n_visible(), ErrorKind::kValidation,
          "fit batch width does not match visible unit count");
  const auto n = fit_batch.cols();
  const MatrixXr x = surrogate_features(fit_batch);
  const VectorXr y = 2.0 * log_amplitudes(params, fit_batch).real();

  SurrogateFit fit;
  VectorXr coef;
  Eigen::ColPivHouseholderQR<MatrixXr> qr(x);
  if (qr.rank() == x.cols()) {
    coef = qr.solve(y);
  } else {
    const Real ridge = 1e-6 * static_cast<Real>(x.rows());
    MatrixXr normal = x.transpose() * x;
    normal.diagonal().array() += ridge;
    coef = normal.ldlt().solve(x.transpose() * y);
    fit.ridge_fallback = true;
  }
  fit.residual = (x * coef - y).norm();

  SurrogateParams& s = fit.surrogate;
  s.fields = coef.segment(1, n);
  s.couplings = MatrixXr::Zero(n, n);
  Eigen::Index c = 1 + n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) s.couplings(i, j) = s.couplings(j, i) = coef(c++);
  s.tau = tau;
  s.gamma = gamma;
  s.n_trot = n_trot;
  validate(s);
  return fit;
}

VectorXr surrogate_energies(const SurrogateParams& s) {
  const SpinBatch configs = all_configs(s.size());
  VectorXr e = configs * s.fields;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    for (Eigen::Index j = i + 1; j < s.size(); ++j)
      e += s.couplings(i, j) * configs.col(i).cwiseProduct(configs.col(j));
  return e;
}

MatrixXc trotter_unitary(const SurrogateParams& s, int max_qubits) {
  validate(s);
  const int n = s.size();
  require(n <= max_qubits, ErrorKind::kCapExceeded,
          "surrogate register exceeds the Trotter cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Real dt = s.tau / s.n_trot;
  const VectorXc phases =
      (Complex(0, -s.gamma * dt) * surrogate_energies(s).cast<Complex>()).array().exp().matrix();
  // exp(-i phi X) = cos(phi) I - i sin(phi) X on every qubit.
  const Real phi = (1.0 - s.gamma) * dt;
  const Complex c(std::cos(phi), 0.0);
  const Complex is(0.0, -std::sin(phi));

  MatrixXc u = MatrixXc::Identity(dim, dim);
  for (int step = 0; step < s.n_trot; ++step) {
    for (int q = 0; q < n; ++q) {
      const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
      for (Eigen::Index r = 0; r < dim; ++r) {
        if (r & bit) continue;
        const Eigen::RowVectorXcd lo = u.row(r);
        const Eigen::RowVectorXcd hi = u.row(r | bit);
        u.row(r) = c * lo + is * hi;
        u.row(r | bit) = is * lo + c * hi;
      }
    }
    u = phases.asDiagonal() * u;
  }
  return u;
}

MatrixXr trotter_proposal_matrix(const SurrogateParams& s, int max_qubits) {
  // Column v of U is U|v>, so the proposal from v is |U(v', v)|^2.
  return trotter_unitary(s, max_qubits).cwiseAbs2().transpose();
}

TrotterProposal TrotterProposal::build(const SurrogateParams& s, int max_qubits) {
  TrotterProposal p;
  p.q = trotter_proposal_matrix(s, max_qubits);
  p.cdf = p.q;
  for (Eigen::Index r = 0; r < p.cdf.rows(); ++r)
    for (Eigen::Index c = 1; c < p.cdf.cols(); ++c) p.cdf(r, c) += p.cdf(r, c - 1);
  return p;
}

// ---------------------------------------------------------------- sampling

const char* to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::kLocalFlip: return "local_flip";
    case ProposalKind::kUniform: return "uniform";
    case ProposalKind::kSurrogateTrotter: return "surrogate_trotter";
  }
  return "?";
}

ProposalKind proposal_from_string(const std::string& name) {
  if (name == "local_flip") return ProposalKind::kLocalFlip;
  if (name == "uniform") return ProposalKind::kUniform;
  if (name == "surrogate_trotter") return ProposalKind::kSurrogateTrotter;
  throw Error(ErrorKind::kValidation, "unknown proposal kind '" + name + "'");
}

void validate(const SamplerConfig& c) {
  require(c.n_samples >= 1 && c.thinning >= 1 && c.n_chains >= 1 && c.burn_in >= 0,
          ErrorKind::kValidation,
          "sampler counts must be >= 1 (burn_in >= 0)");
}

namespace {

// Cached log psi evaluation for one walker.
class Walker {
 public:
  explicit Walker(const RbmParams& params) : params_(params) {}

  Complex log_psi(const VectorXr& s) const {
    const VectorXc theta =
        params_.beta * (params_.b + params_.w.transpose() * s.cast<Complex>());
    Complex out = params_.beta * params_.a.dot(s.cast<Complex>());
    for (Eigen::Index j = 0; j < theta.size(); ++j) out += log_2cosh(theta(j));
    return out;
  }

 private:
  const RbmParams& params_;
};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::uint64_t chain_seed(std::uint64_t seed, int chain) {
  return splitmix64(splitmix64(seed) + static_cast<std::uint64_t>(chain));
}

struct ChainOutput {
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
};

ChainOutput run_chain(const RbmParams& params, const SamplerConfig& config,
                      const TrotterProposal* proposal, int chain, int length,
                      Eigen::Ref<SpinBatch> out, Eigen::Ref<VectorXr> log_prob) {
  const int nv = params.n_visible();
  std::mt19937_64 rng(chain_seed(config.seed, chain));
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  std::uniform_int_distribution<int> site(0, nv - 1);
  std::bernoulli_distribution coin(0.5);
  const Walker walker(params);

  auto random_config = [&] {
    VectorXr s(nv);
    for (int i = 0; i < nv; ++i) s(i) = coin(rng) ? -1.0 : 1.0;
    return s;
  };

  VectorXr s;
  Complex lp;
  int attempts = 0;
  do {
    require(attempts++ < 100, ErrorKind::kNumerical,
            "could not find a start configuration with nonzero amplitude");
    s = random_config();
    lp = walker.log_psi(s);
  } while (!finite(lp));
  std::uint64_t idx = index_from_spins(s);

  ChainOutput stats;
  const std::int64_t total_steps =
      config.burn_in + static_cast<std::int64_t>(length) * config.thinning;
  int kept = 0;
  for (std::int64_t step = 1; step <= total_steps; ++step) {
    VectorXr s_new;
    std::uint64_t idx_new = 0;
    Real log_q_ratio = 0;  // log q(v|v') - log q(v'|v)
    switch (config.proposal) {
      case ProposalKind::kLocalFlip: {
        s_new = s;
        const int k = site(rng);
        s_new(k) = -s_new(k);
        idx_new = idx ^ (std::uint64_t{1} << (nv - 1 - k));
        break;
      }
      case ProposalKind::kUniform:
        s_new = random_config();
        idx_new = index_from_spins(s_new);
        break;
      case ProposalKind::kSurrogateTrotter: {
        const auto row = proposal->cdf.row(static_cast<Eigen::Index>(idx));
        const Real u = unif(rng) * row(row.size() - 1);
        Eigen::Index j = 0;
        Eigen::Index lo = 0, hi = row.size() - 1;
        while (lo < hi) {
          const Eigen::Index mid = (lo + hi) / 2;
          if (row(mid) > u) hi = mid; else lo = mid + 1;
        }
        j = lo;
        idx_new = static_cast<std::uint64_t>(j);
        s_new = spins_from_index(idx_new, nv);
        const Real fwd = proposal->q(static_cast<Eigen::Index>(idx), j);
        const Real bwd = proposal->q(j, static_cast<Eigen::Index>(idx));
        log_q_ratio = bwd > 0 ? std::log(bwd) - std::log(fwd)
                              : -std::numeric_limits<Real>::infinity();
        break;
      }
    }
    const bool counting = step > config.burn_in;
    if (counting) ++stats.proposed;
    const Complex lp_new = idx_new == idx ? lp : walker.log_psi(s_new);
    if (finite(lp_new)) {
      const Real log_acc = 2.0 * (lp_new.real() - lp.real()) + log_q_ratio;
      if (log_acc >= 0 || unif(rng) < std::exp(log_acc)) {
        s = std::move(s_new);
        lp = lp_new;
        idx = idx_new;
        if (counting) ++stats.accepted;
      }
    }
    if (counting && (step - config.burn_in) % config.thinning == 0) {
      out.row(kept) = s.transpose();
      log_prob(kept) = 2.0 * lp.real();
      ++kept;
    }
  }
  return stats;
}

}  // namespace

SampleResult mh_sample(const RbmParams& params, const SamplerConfig& config,
                       const TrotterProposal* proposal) {
  validate(params);
  validate(config);
  const bool needs = config.proposal == ProposalKind::kSurrogateTrotter;
  require(needs == (proposal != nullptr), ErrorKind::kValidation,
          "a surrogate proposal is required exactly for surrogate_trotter");
  const int nv = params.n_visible();
  if (needs)
    require(proposal->q.rows() == (Eigen::Index{1} << nv), ErrorKind::kValidation,
            "surrogate proposal size does not match visible unit count");
  require(nv <= 62, ErrorKind::kValidation, "too many visible units");

  const int length = (config.n_samples + config.n_chains - 1) / config.n_chains;
  SampleResult res;
  res.samples.n_chains = config.n_chains;
  res.samples.chain_length = length;
  res.samples.configs.resize(static_cast<Eigen::Index>(length) * config.n_chains, nv);
  VectorXr log_prob(res.samples.configs.rows());

  std::int64_t accepted = 0, proposed = 0;
  for (int c = 0; c < config.n_chains; ++c) {
    const Eigen::Index off = static_cast<Eigen::Index>(c) * length;
    const ChainOutput st =
        run_chain(params, config, proposal, c, length,
                  res.samples.configs.middleRows(off, length), log_prob.segment(off, length));
    accepted += st.accepted;
    proposed += st.proposed;
  }
  auto& d = res.diagnostics;
  d.proposal = config.proposal;
  d.acceptance_rate = proposed > 0 ? static_cast<Real>(accepted) / static_cast<Real>(proposed) : 0.0;
  d.autocorr_time = integrated_autocorr_time(
      std::span<const Real>(log_prob.data(), static_cast<std::size_t>(log_prob.size())),
      config.n_chains);
  d.n_samples = res.samples.size();
  d.seed = config.seed;
  return res;
}

SampleResult mh_sample(const RbmParams& params, const SamplerConfig& config,
                       const std::optional<SurrogateParams>& surrogate) {
  if (!surrogate) return mh_sample(params, config, nullptr);
  const TrotterProposal p = TrotterProposal::build(*surrogate);
  return mh_sample(params, config, &p);
}

std::uint64_t replica_seed(std::uint64_t seed, int replica) {
  return splitmix64(seed ^ static_cast<std::uint64_t>(replica));
}

std::vector<SampleResult> sample_replicas(const RbmParams& params,
                                          const SamplerConfig& config, int k,
                                          const TrotterProposal* proposal) {
  require(k >= 2, ErrorKind::kValidation, "need at least two replicas");
  std::vector<SampleResult> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    SamplerConfig c = config;
    c.seed = replica_seed(config.seed, r);
    out.push_back(mh_sample(params, c, proposal));
  }
  return out;
}

VectorXr exact_distribution(const RbmParams& params, int max_visible) {
  const VectorXr p = amplitude_table(params, max_visible).cwiseAbs2();
  return p / p.sum();
}

MatrixXr mh_transition_matrix(const RbmParams& params, ProposalKind kind,
                              const TrotterProposal* proposal, int max_visible) {
  const int nv = params.n_visible();
  require(nv <= max_visible, ErrorKind::kCapExceeded,
          "transition matrix requested for too many visible units");
  const Eigen::Index dim = Eigen::Index{1} << nv;
  MatrixXr q = MatrixXr::Zero(dim, dim);
  switch (kind) {
    case ProposalKind::kLocalFlip:
      for (Eigen::Index v = 0; v < dim; ++v)
        for (int k = 0; k < nv; ++k) q(v, v ^ (Eigen::Index{1} << k)) += 1.0 / nv;
      break;
    case ProposalKind::kUniform:
      q.setConstant(1.0 / static_cast<Real>(dim));
      break;
    case ProposalKind::kSurrogateTrotter:
      require(proposal != nullptr, ErrorKind::kValidation,
              "surrogate proposal missing");
      q = proposal->q;
      break;
  }
  const VectorXr pi = exact_distribution(params, max_visible);
  MatrixXr t = MatrixXr::Zero(dim, dim);
  for (Eigen::Index v = 0; v < dim; ++v) {
    Real stay = 1.0;
    for (Eigen::Index w = 0; w < dim; ++w) {
      if (w == v || q(v, w) == 0.0) continue;
      const Real num = pi(w) * q(w, v);
      const Real den = pi(v) * q(v, w);
      const Real acc = den > 0 ? std::min(1.0, num / den) : 1.0;
      t(v, w) = q(v, w) * acc;
      stay -= t(v, w);
    }
    t(v, v) = stay;
  }
  return t;
}

Real tv_distance(const SampleSet& samples, const VectorXr& exact) {
  VectorXr counts = VectorXr::Zero(exact.size());
  for (Eigen::Index r = 0; r < samples.configs.rows(); ++r) {
    const auto idx = index_from_spins(samples.configs.row(r).transpose());
    require(static_cast<Eigen::Index>(idx) < exact.size(), ErrorKind::kValidation,
            "sample outside the exact distribution support");
    counts(static_cast<Eigen::Index>(idx)) += 1.0;
  }
  counts /= static_cast<Real>(samples.configs.rows());
  return 0.5 * (counts - exact).cwiseAbs().sum();
}

Real integrated_autocorr_time(std::span<const Real> series, int n_chains,
                              Real window_c) {
  require(n_chains >= 1, ErrorKind::kValidation, "n_chains must be >= 1");
  const auto total = static_cast<Eigen::Index>(series.size());
  const Eigen::Index len = total / n_chains;
  if (len < 2) return 1.0;
  const Eigen::Map<const VectorXr> x(series.data(), total);
  const Real mean = x.head(len * n_chains).mean();

  auto autocov = [&](Eigen::Index t) {
    Real acc = 0;
    for (int c = 0; c < n_chains; ++c) {
      const auto seg = x.segment(static_cast<Eigen::Index>(c) * len, len).array() - mean;
      acc += (seg.head(len - t) * seg.tail(len - t)).sum() / static_cast<Real>(len);
    }
    return acc / n_chains;
  };

  const Real c0 = autocov(0);
  if (!(c0 > 1e-14 * std::max<Real>(1.0, mean * mean))) return 1.0;
  Real tau = 1.0;
  for (Eigen::Index w = 1; w < len; ++w) {
    tau += 2.0 * autocov(w) / c0;
    if (static_cast<Real>(w) >= window_c * tau) break;
  }
  return std::max<Real>(tau, 1.0);
}

}  // namespace rbmaxent
