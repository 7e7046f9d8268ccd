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

#include "rbmaxent/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rbmaxent {

RbmParams RbmParams::zeros(int n_visible, int n_hidden) {
  require(n_visible >= 1 && n_hidden >= 0, ErrorKind::kValidation,
          "invalid RBM shape");
  RbmParams p;
  p.a = VectorXc::Zero(n_visible);
  p.b = VectorXc::Zero(n_hidden);
  p.w = MatrixXc::Zero(n_visible, n_hidden);
  return p;
}

RbmParams RbmParams::random(int n_visible, int n_hidden, Real stddev,
                            std::mt19937_64& rng) {
  RbmParams p = zeros(n_visible, n_hidden);
  std::normal_distribution<Real> normal(0.0, stddev);
  auto draw = [&] { return Complex(normal(rng), normal(rng)); };
  for (auto& x : p.a.reshaped()) x = draw();
  for (auto& x : p.b.reshaped()) x = draw();
  for (auto& x : p.w.reshaped<Eigen::RowMajor>()) x = draw();
  return p;
}

void validate(const RbmParams& params) {
  require(params.n_visible() >= 1, ErrorKind::kValidation,
          "RBM needs at least one visible unit");
  require(params.w.rows() == params.a.size() && params.w.cols() == params.b.size(),
          ErrorKind::kValidation, "weight matrix shape mismatch");
  require(std::isfinite(params.beta) && params.beta > 0, ErrorKind::kValidation,
          "beta must be positive and finite");
  auto ok = [](const auto& m) {
    return m.allFinite() &&
           (m.size() == 0 ||
            (m.real().cwiseAbs().maxCoeff() <= kParamMagnitudeLimit &&
             m.imag().cwiseAbs().maxCoeff() <= kParamMagnitudeLimit));
  };
  require(ok(params.a) && ok(params.b) && ok(params.w), ErrorKind::kValidation,
          "RBM parameters must be finite with |Re|,|Im| <= 30");
}

void validate(const RbmParams& params, const Partition& partition) {
  validate(params);
  require(partition.n_sys >= 1 && partition.n_env >= 0, ErrorKind::kValidation,
          "partition needs n_sys >= 1 and n_env >= 0");
  require(partition.n_visible() == params.n_visible(), ErrorKind::kValidation,
          "partition size does not match visible unit count");
}

Complex log_2cosh(Complex z) {
  // log(2 cosh z) = z + log(1 + e^{-2z}), mirrored for Re z < 0.
  if (z.real() < 0) z = -z;
  return z + std::log(1.0 + std::exp(-2.0 * z));
}

MatrixXc hidden_angles(const RbmParams& params, const SpinBatch& configs) {
  MatrixXc theta = configs.cast<Complex>() * params.w;
  theta.rowwise() += params.b.transpose();
  return params.beta * theta;
}

VectorXc log_amplitudes(const RbmParams& params, const SpinBatch& configs) {
  const MatrixXc theta = hidden_angles(params, configs);
  VectorXc out = params.beta * (configs.cast<Complex>() * params.a);
  for (Eigen::Index r = 0; r < theta.rows(); ++r)
    for (Eigen::Index j = 0; j < theta.cols(); ++j) out(r) += log_2cosh(theta(r, j));
  return out;
}

Complex log_amplitude(const RbmParams& params, const SpinConfig& config) {
  require(config.size() == params.n_visible(), ErrorKind::kValidation,
          "configuration length does not match visible unit count");
  const Complex v = log_amplitudes(params, config.transpose())(0);
  require(std::isfinite(v.real()) && std::isfinite(v.imag()),
          ErrorKind::kNumerical, "log amplitude is not finite");
  return v;
}

Complex amplitude_ratio(const RbmParams& params, const SpinConfig& num,
                        const SpinConfig& den) {
  require(num.size() == den.size(), ErrorKind::kValidation,
          "ratio of configurations with different lengths");
  if (num == den) return {1.0, 0.0};
  const Complex r = std::exp(log_amplitude(params, num) - log_amplitude(params, den));
  require(std::isfinite(r.real()) && std::isfinite(r.imag()),
          ErrorKind::kNumerical, "amplitude ratio overflowed");
  return r;
}

VectorXc amplitude_table(const RbmParams& params, int max_visible) {
  require(params.n_visible() <= max_visible, ErrorKind::kCapExceeded,
          "visible register exceeds the dense cap");
  VectorXc logs = log_amplitudes(params, all_configs(params.n_visible()));
  require(logs.allFinite(), ErrorKind::kNumerical, "log amplitude is not finite");
  const Real shift = logs.real().maxCoeff();
  return (logs.array() - shift).exp().matrix();
}

MatrixXc exact_density_matrix(const RbmParams& params, const Partition& partition,
                              int max_visible) {
  validate(params, partition);
  const VectorXc psi = amplitude_table(params, max_visible);
  const Eigen::Index ds = Eigen::Index{1} << partition.n_sys;
  const Eigen::Index de = Eigen::Index{1} << partition.n_env;
  // Row-major index split: psi(s * de + e) -> amp(s, e).
  const MatrixXc amp = psi.reshaped<Eigen::RowMajor>(ds, de);
  MatrixXc rho = amp * amp.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// --------------------------------------------------------------- parameters

int parameter_count(int n_visible, int n_hidden) {
  return 2 * (n_visible + n_hidden + n_visible * n_hidden);
}

VectorXr pack_parameters(const RbmParams& params) {
  const int nv = params.n_visible();
  const int m = params.n_hidden();
  VectorXr out(parameter_count(nv, m));
  Eigen::Index o = 0;
  out.segment(o, nv) = params.a.real(); o += nv;
  out.segment(o, nv) = params.a.imag(); o += nv;
  out.segment(o, m) = params.b.real(); o += m;
  out.segment(o, m) = params.b.imag(); o += m;
  out.segment(o, nv * m) = params.w.real().reshaped<Eigen::RowMajor>(); o += nv * m;
  out.segment(o, nv * m) = params.w.imag().reshaped<Eigen::RowMajor>();
  return out;
}

RbmParams unpack_parameters(const VectorXr& packed, int n_visible, int n_hidden,
                            Real beta) {
  require(packed.size() == parameter_count(n_visible, n_hidden),
          ErrorKind::kValidation, "packed parameter length mismatch");
  RbmParams p = RbmParams::zeros(n_visible, n_hidden);
  p.beta = beta;
  const int nv = n_visible;
  const int m = n_hidden;
  Eigen::Index o = 0;
  p.a.real() = packed.segment(o, nv); o += nv;
  p.a.imag() = packed.segment(o, nv); o += nv;
  p.b.real() = packed.segment(o, m); o += m;
  p.b.imag() = packed.segment(o, m); o += m;
  p.w.real() = packed.segment(o, nv * m).reshaped<Eigen::RowMajor>(nv, m); o += nv * m;
  p.w.imag() = packed.segment(o, nv * m).reshaped<Eigen::RowMajor>(nv, m);
  return p;
}

const char* to_string(ParamFamily family) {
  switch (family) {
    case ParamFamily::kReA: return "Re(a)";
    case ParamFamily::kImA: return "Im(a)";
    case ParamFamily::kReB: return "Re(b)";
    case ParamFamily::kImB: return "Im(b)";
    case ParamFamily::kReW: return "Re(W)";
    case ParamFamily::kImW: return "Im(W)";
  }
  return "?";
}

int packed_index(const ParamCoord& c, int nv, int m) {
  auto check = [](bool ok) {
    require(ok, ErrorKind::kValidation, "invalid parameter coordinate");
  };
  switch (c.family) {
    case ParamFamily::kReA: check(c.k >= 0 && c.k < nv); return c.k;
    case ParamFamily::kImA: check(c.k >= 0 && c.k < nv); return nv + c.k;
    case ParamFamily::kReB: check(c.p >= 0 && c.p < m); return 2 * nv + c.p;
    case ParamFamily::kImB: check(c.p >= 0 && c.p < m); return 2 * nv + m + c.p;
    case ParamFamily::kReW:
      check(c.k >= 0 && c.k < nv && c.p >= 0 && c.p < m);
      return 2 * nv + 2 * m + c.k * m + c.p;
    case ParamFamily::kImW:
      check(c.k >= 0 && c.k < nv && c.p >= 0 && c.p < m);
      return 2 * nv + 2 * m + nv * m + c.k * m + c.p;
  }
  throw Error(ErrorKind::kValidation, "invalid parameter family");
}

ParamCoord coord_of(int i, int nv, int m) {
  require(i >= 0 && i < parameter_count(nv, m), ErrorKind::kValidation,
          "packed index out of range");
  if (i < nv) return {ParamFamily::kReA, i, 0};
  i -= nv;
  if (i < nv) return {ParamFamily::kImA, i, 0};
  i -= nv;
  if (i < m) return {ParamFamily::kReB, 0, i};
  i -= m;
  if (i < m) return {ParamFamily::kImB, 0, i};
  i -= m;
  if (i < nv * m) return {ParamFamily::kReW, i / m, i % m};
  i -= nv * m;
  return {ParamFamily::kImW, i / m, i % m};
}

MatrixXc log_derivatives(const RbmParams& params, const SpinBatch& configs) {
  const int nv = params.n_visible();
  const int m = params.n_hidden();
  const Real beta = params.beta;
  const Complex ib(0.0, beta);
  const MatrixXc t = hidden_angles(params, configs).array().tanh().matrix();
  MatrixXc out(configs.rows(), parameter_count(nv, m));
  for (Eigen::Index r = 0; r < configs.rows(); ++r) {
    Eigen::Index o = 0;
    for (int k = 0; k < nv; ++k) out(r, o++) = beta * configs(r, k);
    for (int k = 0; k < nv; ++k) out(r, o++) = ib * configs(r, k);
    for (int p = 0; p < m; ++p) out(r, o++) = beta * t(r, p);
    for (int p = 0; p < m; ++p) out(r, o++) = ib * t(r, p);
    for (int k = 0; k < nv; ++k)
      for (int p = 0; p < m; ++p) out(r, o++) = beta * configs(r, k) * t(r, p);
    for (int k = 0; k < nv; ++k)
      for (int p = 0; p < m; ++p) out(r, o++) = ib * configs(r, k) * t(r, p);
  }
  return out;
}

Complex d_matrix_entry(const RbmParams& params, const ParamCoord& which,
                       const SpinConfig& v, const SpinConfig& v_prime) {
  const int nv = params.n_visible();
  require(v.size() == nv && v_prime.size() == nv, ErrorKind::kValidation,
          "configuration length does not match visible unit count");
  const int idx = packed_index(which, nv, params.n_hidden());
  SpinBatch both(2, nv);
  both.row(0) = v.transpose();
  both.row(1) = v_prime.transpose();
  const MatrixXc d = log_derivatives(params, both);
  return d(0, idx) + std::conj(d(1, idx));
}

int clip_parameters(RbmParams& params, Real limit) {
  int clipped = 0;
  auto clip = [&](auto& m) {
    for (auto& z : m.reshaped()) {
      const Real re = std::clamp(z.real(), -limit, limit);
      const Real im = std::clamp(z.imag(), -limit, limit);
      clipped += (re != z.real()) + (im != z.imag());
      z = Complex(re, im);
    }
  };
  clip(params.a);
  clip(params.b);
  clip(params.w);
  return clipped;
}

}  // namespace rbmaxent
