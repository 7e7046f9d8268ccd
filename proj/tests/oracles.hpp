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

// Brute-force reference implementations used only by tests. None of them
// calls into the library beyond plain data types, so agreement with the
// library is evidence rather than tautology.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rbmaxent/common.hpp"
#include "rbmaxent/rbm.hpp"

namespace oracle {

using rbmaxent::Complex;
using rbmaxent::MatrixXc;
using rbmaxent::MatrixXr;
using rbmaxent::Real;
using rbmaxent::VectorXc;
using rbmaxent::VectorXr;

inline MatrixXc pauli_1q(char c) {
  MatrixXc m(2, 2);
  const Complex i(0, 1);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

inline MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Kronecker product of single-qubit Paulis, leftmost letter = qubit 0 = MSB.
inline MatrixXc pauli_matrix(const std::string& letters) {
  MatrixXc m = MatrixXc::Identity(1, 1);
  for (char c : letters) m = kron(m, pauli_1q(c));
  return m;
}

/// Spin of unit `k` (0 = MSB) in basis index `idx` over n units: bit 0 -> +1.
inline Real spin(std::uint64_t idx, int k, int n) {
  return ((idx >> (n - 1 - k)) & 1U) ? -1.0 : 1.0;
}

/// psi(sigma) = sum_h exp(beta (a.sigma + b.h + sigma W h)) by enumerating all
/// 2^m hidden configurations.
inline Complex psi_by_hidden_sum(const rbmaxent::RbmParams& p, std::uint64_t idx) {
  const int nv = p.n_visible();
  const int m = p.n_hidden();
  Complex total = 0;
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << m); ++h) {
    Complex e = 0;
    for (int k = 0; k < nv; ++k) e += p.a(k) * spin(idx, k, nv);
    for (int j = 0; j < m; ++j) {
      const Real hj = spin(h, j, m);
      e += p.b(j) * hj;
      for (int k = 0; k < nv; ++k) e += p.w(k, j) * spin(idx, k, nv) * hj;
    }
    total += std::exp(p.beta * e);
  }
  return total;
}

inline VectorXc psi_vector(const rbmaxent::RbmParams& p) {
  const auto dim = std::uint64_t{1} << p.n_visible();
  VectorXc v(static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = psi_by_hidden_sum(p, i);
  return v;
}

/// Reduced system density matrix as normalized V V^dagger with V(s, e).
inline MatrixXc rho_from_psi(const VectorXc& psi, int n_sys, int n_env) {
  const Eigen::Index ds = Eigen::Index{1} << n_sys;
  const Eigen::Index de = Eigen::Index{1} << n_env;
  MatrixXc v(ds, de);
  for (Eigen::Index s = 0; s < ds; ++s)
    for (Eigen::Index e = 0; e < de; ++e) v(s, e) = psi(s * de + e);
  MatrixXc rho = v * v.adjoint();
  return rho / rho.trace();
}

/// Reduced density matrix of a pure state keeping the leading n_keep qubits,
/// built by an explicit triple loop.
inline MatrixXc reduce_leading(const VectorXc& psi, int n_keep, int n_total) {
  const Eigen::Index dk = Eigen::Index{1} << n_keep;
  const Eigen::Index dr = Eigen::Index{1} << (n_total - n_keep);
  MatrixXc rho = MatrixXc::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j)
      for (Eigen::Index r = 0; r < dr; ++r)
        rho(i, j) += psi(i * dr + r) * std::conj(psi(j * dr + r));
  return rho;
}

inline Real trace_power(const MatrixXc& rho, int n) {
  MatrixXc acc = rho;
  for (int k = 1; k < n; ++k) acc = acc * rho;
  return acc.trace().real();
}

inline Real vne_bits(const MatrixXc& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho);
  Real s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Real l = es.eigenvalues()(i);
    if (l > 1e-300) s -= l * std::log2(l);
  }
  return s;
}

inline MatrixXc random_density(int dim, std::mt19937_64& rng, int rank = -1) {
  std::normal_distribution<Real> g;
  const int r = rank > 0 ? rank : dim;
  MatrixXc a(dim, r);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(g(rng), g(rng));
  MatrixXc rho = a * a.adjoint();
  return rho / rho.trace();
}

inline VectorXc random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<Real> g;
  VectorXc v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

/// Central differences of a scalar function.
inline VectorXr central_diff(const std::function<Real(const VectorXr&)>& f,
                             const VectorXr& x, Real h) {
  VectorXr g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXr xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

/// Sum over X on every qubit.
inline MatrixXc transverse_field(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  MatrixXc hx = MatrixXc::Zero(dim, dim);
  for (int q = 0; q < n; ++q) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(q)] = 'X';
    hx += pauli_matrix(s);
  }
  return hx;
}

}  // namespace oracle
