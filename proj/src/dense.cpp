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

#include "rbmaxent/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>

namespace rbmaxent {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kOutOfRange: return "out_of_range";
    case ErrorKind::kNonUnitary: return "non_unitary";
    case ErrorKind::kNonCommuting: return "non_commuting";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kCapExceeded: return "cap_exceeded";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kEstimation: return "estimation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

SpinConfig spins_from_index(std::uint64_t index, int n) {
  SpinConfig s(n);
  for (int i = 0; i < n; ++i) {
    const auto bit = (index >> (n - 1 - i)) & 1U;
    s(i) = bit ? -1.0 : 1.0;
  }
  return s;
}

std::uint64_t index_from_spins(const Eigen::Ref<const VectorXr>& spins) {
  std::uint64_t index = 0;
  const auto n = spins.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    require(spins(i) == 1.0 || spins(i) == -1.0, ErrorKind::kValidation,
            "spin entries must be +1 or -1");
    index = (index << 1) | (spins(i) < 0 ? 1U : 0U);
  }
  return index;
}

SpinBatch all_configs(int n) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  SpinBatch out(static_cast<Eigen::Index>(dim), n);
  for (std::uint64_t i = 0; i < dim; ++i)
    out.row(static_cast<Eigen::Index>(i)) = spins_from_index(i, n).transpose();
  return out;
}

// ---------------------------------------------------------------- PauliString

PauliString::PauliString(std::string_view letters) : letters_(letters) {
  require(!letters_.empty(), ErrorKind::kValidation, "empty Pauli string");
  require(letters_.size() <= 62, ErrorKind::kValidation,
          "Pauli string too long");
  const int n = size();
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
    switch (letters_[static_cast<std::size_t>(i)]) {
      case 'I': break;
      case 'X': x_mask_ |= bit; break;
      case 'Y':
        x_mask_ |= bit;
        y_mask_ |= bit;
        ++y_count_;
        break;
      case 'Z': z_mask_ |= bit; break;
      default:
        throw Error(ErrorKind::kValidation,
                    "invalid Pauli letter in '" + letters_ + "'");
    }
  }
}

bool PauliString::is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

Complex PauliString::element(std::uint64_t row) const {
  // <r|Y|r^1> = -i (-1)^r, <r|Z|r> = (-1)^r.
  static constexpr Complex kMinusIPow[4] = {
      {1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const int parity = std::popcount(row & (y_mask_ | z_mask_)) & 1;
  const Complex phase = kMinusIPow[y_count_ & 3];
  return parity ? -phase : phase;
}

bool PauliString::commutes_with(const PauliString& other) const {
  require(size() == other.size(), ErrorKind::kValidation,
          "Pauli strings of different length");
  int anti = 0;
  for (int i = 0; i < size(); ++i) {
    const char a = (*this)[i];
    const char b = other[i];
    if (a != 'I' && b != 'I' && a != b) ++anti;
  }
  return anti % 2 == 0;
}

MatrixXc PauliString::matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << size();
  MatrixXc m = MatrixXc::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto c = static_cast<Eigen::Index>(static_cast<std::uint64_t>(r) ^ x_mask_);
    m(r, c) = element(static_cast<std::uint64_t>(r));
  }
  return m;
}

PauliString PauliString::extended(int extra) const {
  return PauliString(letters_ + std::string(static_cast<std::size_t>(extra), 'I'));
}

// -------------------------------------------------------------------- gates

MatrixXc haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<Real> normal(0.0, 1.0);
  MatrixXc z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i)
      z(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<MatrixXc> qr(z);
  MatrixXc q = qr.householderQ() * MatrixXc::Identity(dim, dim);
  const MatrixXc& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Real mag = std::abs(r(j, j));
    const Complex phase = mag > 0 ? r(j, j) / mag : Complex(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

namespace {

void check_unitary(const MatrixXc& gate) {
  const MatrixXc err =
      gate.adjoint() * gate - MatrixXc::Identity(gate.rows(), gate.cols());
  require(err.cwiseAbs().maxCoeff() < 1e-10, ErrorKind::kNonUnitary,
          "gate is not unitary within 1e-10");
}

}  // namespace

StateVector apply_gate(const StateVector& state, const MatrixXc& gate,
                       std::span<const int> targets) {
  const int q = qubit_count_of(state.size());
  require((Eigen::Index{1} << q) == state.size(), ErrorKind::kValidation,
          "state length is not a power of two");
  const auto k = static_cast<int>(targets.size());
  require(k == 1 || k == 2, ErrorKind::kValidation,
          "gates act on one or two qubits");
  require(gate.rows() == (1 << k) && gate.cols() == (1 << k),
          ErrorKind::kValidation, "gate shape does not match target count");
  for (int t : targets)
    require(t >= 0 && t < q, ErrorKind::kOutOfRange, "target qubit out of range");
  require(k == 1 || targets[0] != targets[1], ErrorKind::kValidation,
          "targets must be distinct");
  check_unitary(gate);

  std::vector<std::uint64_t> bits(static_cast<std::size_t>(k));
  std::uint64_t mask = 0;
  for (int i = 0; i < k; ++i) {
    bits[static_cast<std::size_t>(i)] = std::uint64_t{1} << (q - 1 - targets[static_cast<std::size_t>(i)]);
    mask |= bits[static_cast<std::size_t>(i)];
  }
  const int sub = 1 << k;
  std::vector<std::uint64_t> offsets(static_cast<std::size_t>(sub));
  for (int s = 0; s < sub; ++s) {
    std::uint64_t off = 0;
    for (int i = 0; i < k; ++i)
      if ((s >> (k - 1 - i)) & 1) off |= bits[static_cast<std::size_t>(i)];
    offsets[static_cast<std::size_t>(s)] = off;
  }

  StateVector out = state;
  VectorXc in(sub);
  const auto dim = static_cast<std::uint64_t>(state.size());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (int s = 0; s < sub; ++s)
      in(s) = state(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(s)]));
    const VectorXc res = gate * in;
    for (int s = 0; s < sub; ++s)
      out(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(s)])) = res(s);
  }
  return out;
}

StateVector apply_cnot(const StateVector& state, int control, int target) {
  MatrixXc cnot = MatrixXc::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const int targets[2] = {control, target};
  return apply_gate(state, cnot, targets);
}

StateVector random_circuit_state(const CircuitSpec& spec, int max_qubits) {
  require(spec.layers >= 1, ErrorKind::kValidation, "circuit needs >= 1 layer");
  require(spec.qubit_count >= 1, ErrorKind::kValidation,
          "circuit needs >= 1 qubit");
  require(spec.qubit_count <= max_qubits, ErrorKind::kCapExceeded,
          "circuit exceeds the dense qubit cap");
  std::mt19937_64 rng(spec.seed);
  StateVector psi = StateVector::Zero(Eigen::Index{1} << spec.qubit_count);
  psi(0) = 1.0;
  for (int layer = 0; layer < spec.layers; ++layer) {
    for (int qb = 0; qb < spec.qubit_count; ++qb) {
      const int t[1] = {qb};
      psi = apply_gate(psi, haar_unitary(2, rng), t);
    }
    for (int qb = 0; qb + 1 < spec.qubit_count; ++qb)
      psi = apply_cnot(psi, qb, qb + 1);
  }
  return psi;
}

// ------------------------------------------------------------ partial trace

namespace {

struct Split {
  std::vector<int> keep;
  std::vector<int> rest;
};

Split split_qubits(int q, std::span<const int> keep) {
  require(!keep.empty(), ErrorKind::kValidation, "keep set is empty");
  std::set<int> ks;
  for (int k : keep) {
    require(k >= 0 && k < q, ErrorKind::kOutOfRange, "keep index out of range");
    require(ks.insert(k).second, ErrorKind::kValidation,
            "duplicate keep index");
  }
  Split s;
  for (int i = 0; i < q; ++i) (ks.count(i) ? s.keep : s.rest).push_back(i);
  return s;
}

std::uint64_t gather(std::uint64_t index, int q, const std::vector<int>& qubits) {
  std::uint64_t out = 0;
  for (int qb : qubits) out = (out << 1) | ((index >> (q - 1 - qb)) & 1U);
  return out;
}

}  // namespace

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep) {
  const int q = qubit_count_of(state.size());
  const Split s = split_qubits(q, keep);
  const Eigen::Index dk = Eigen::Index{1} << s.keep.size();
  const Eigen::Index dr = Eigen::Index{1} << s.rest.size();
  MatrixXc m(dk, dr);
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(state.size()); ++i)
    m(static_cast<Eigen::Index>(gather(i, q, s.keep)),
      static_cast<Eigen::Index>(gather(i, q, s.rest))) = state(static_cast<Eigen::Index>(i));
  return m * m.adjoint();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int q = qubit_count_of(rho.rows());
  const Split s = split_qubits(q, keep);
  const Eigen::Index dk = Eigen::Index{1} << s.keep.size();
  DensityMatrix out = DensityMatrix::Zero(dk, dk);
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  for (std::uint64_t i = 0; i < dim; ++i) {
    const auto ri = gather(i, q, s.rest);
    const auto ki = gather(i, q, s.keep);
    for (std::uint64_t j = 0; j < dim; ++j) {
      if (gather(j, q, s.rest) != ri) continue;
      out(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(gather(j, q, s.keep))) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

// ------------------------------------------------------------- expectations

Real pauli_expectation_exact(const DensityMatrix& rho, const PauliString& obs) {
  require(rho.rows() == rho.cols() &&
              rho.rows() == (Eigen::Index{1} << obs.size()),
          ErrorKind::kValidation, "observable / density matrix size mismatch");
  Complex acc = 0;
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  for (std::uint64_t r = 0; r < dim; ++r) {
    const std::uint64_t c = r ^ obs.x_mask();
    acc += obs.element(r) * rho(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r));
  }
  return acc.real();
}

namespace {

VectorXr spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

Real trace_power_exact(const DensityMatrix& rho, int n) {
  require(n >= 1, ErrorKind::kValidation, "trace power order must be >= 1");
  const VectorXr ev = spectrum(rho).cwiseMax(0.0);
  return ev.array().pow(static_cast<Real>(n)).sum();
}

Real entropy_exact(const DensityMatrix& rho, EntropyOrder order) {
  require(rho.rows() == rho.cols(), ErrorKind::kValidation,
          "density matrix must be square");
  const VectorXr ev = spectrum(rho).cwiseMax(0.0);
  if (order.von_neumann) {
    Real s = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 0) s -= ev(i) * std::log2(ev(i));
    return s;
  }
  require(order.alpha >= 2, ErrorKind::kValidation,
          "Renyi order must be >= 2");
  const Real tr = ev.array().pow(static_cast<Real>(order.alpha)).sum();
  return std::log2(tr) / (1.0 - order.alpha);
}

DensityCheck check_density_matrix(const DensityMatrix& rho) {
  DensityCheck c;
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - Complex(1, 0));
  const MatrixXc herm = 0.5 * (rho + rho.adjoint());
  c.min_eigenvalue = spectrum(herm).minCoeff();
  return c;
}

Real trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::kValidation,
          "trace distance of differently sized matrices");
  const MatrixXc d = a - b;
  const MatrixXc herm = 0.5 * (d + d.adjoint());
  return 0.5 * spectrum(herm).cwiseAbs().sum();
}

// -------------------------------------------------------------- Gibbs solver

namespace {

struct GibbsState {
  DensityMatrix rho;
  VectorXr expect;
  VectorXr residual;
  Real max_residual = 0;
  Real dual = 0;  ///< log Z + lambda . targets
};

GibbsState gibbs_state(const std::vector<MatrixXc>& ops, const VectorXr& lambdas,
                       std::span<const Real> targets) {
  const Eigen::Index dim = ops.front().rows();
  MatrixXc h = MatrixXc::Zero(dim, dim);
  for (std::size_t k = 0; k < ops.size(); ++k)
    h += lambdas(static_cast<Eigen::Index>(k)) * ops[k];
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  const VectorXr& e = es.eigenvalues();
  const VectorXr w = (-(e.array() - e.minCoeff())).exp();
  GibbsState st;
  st.rho = es.eigenvectors() * (w / w.sum()).asDiagonal() *
           es.eigenvectors().adjoint();
  const auto n = static_cast<Eigen::Index>(ops.size());
  st.expect.resize(n);
  st.residual.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    st.expect(k) = (st.rho * ops[static_cast<std::size_t>(k)]).trace().real();
    st.residual(k) = st.expect(k) - targets[static_cast<std::size_t>(k)];
  }
  st.max_residual = st.residual.cwiseAbs().maxCoeff();
  st.dual = -e.minCoeff() + std::log(w.sum());
  for (Eigen::Index k = 0; k < n; ++k)
    st.dual += lambdas(k) * targets[static_cast<std::size_t>(k)];
  if (!std::isfinite(st.max_residual) || !std::isfinite(st.dual)) {
    st.max_residual = std::numeric_limits<Real>::infinity();
    st.dual = std::numeric_limits<Real>::infinity();
  }
  return st;
}

}  // namespace

GibbsSolution gibbs_maxent_solve(std::span<const PauliString> observables,
                                 std::span<const Real> targets,
                                 const GibbsOptions& options) {
  require(!observables.empty(), ErrorKind::kValidation, "no observables");
  require(observables.size() == targets.size(), ErrorKind::kValidation,
          "observable / target count mismatch");
  const int n_qubits = observables.front().size();
  std::vector<MatrixXc> ops;
  for (const auto& o : observables) {
    require(o.size() == n_qubits, ErrorKind::kValidation,
            "observables act on different qubit counts");
    ops.push_back(o.matrix());
  }
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const MatrixXc comm = ops[i] * ops[j] - ops[j] * ops[i];
      require(comm.cwiseAbs().maxCoeff() < options.commute_tol,
              ErrorKind::kNonCommuting,
              "observables " + observables[i].identifier() + " and " +
                  observables[j].identifier() + " do not commute");
    }
  for (Real t : targets)
    require(std::isfinite(t) && std::abs(t) < 1.0, ErrorKind::kInfeasible,
            "target outside the open interval (-1, 1)");

  const auto n = static_cast<Eigen::Index>(ops.size());
  VectorXr lambdas = VectorXr::Zero(n);
  GibbsState st = gibbs_state(ops, lambdas, targets);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (st.max_residual < options.tolerance) {
      return {st.rho, lambdas, it, st.max_residual};
    }
    // Hessian of the dual: covariance matrix of the commuting observables.
    MatrixXr hess(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a; b < n; ++b) {
        const Real second =
            (st.rho * ops[static_cast<std::size_t>(a)] * ops[static_cast<std::size_t>(b)]).trace().real();
        hess(a, b) = hess(b, a) = second - st.expect(a) * st.expect(b);
      }
    Eigen::LDLT<MatrixXr> ldlt(hess);
    VectorXr step = ldlt.solve(st.residual);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      hess.diagonal().array() += 1e-12;
      step = hess.colPivHouseholderQr().solve(st.residual);
    }
    // Damp while the step makes things worse. The dual decreases along the
    // Newton direction for small enough steps, so the loop terminates.
    const auto improved = [&](const GibbsState& s) {
      return s.max_residual < st.max_residual || s.dual < st.dual;
    };
    Real scale = 1.0;
    GibbsState next = gibbs_state(ops, lambdas + step, targets);
    int halvings = 0;
    while (!improved(next) && halvings < 60) {
      scale *= options.damping;
      next = gibbs_state(ops, lambdas + scale * step, targets);
      ++halvings;
    }
    if (!improved(next)) break;
    lambdas += scale * step;
    st = std::move(next);
  }
  if (st.max_residual < options.tolerance)
    return {st.rho, lambdas, options.max_iterations, st.max_residual};
  throw Error(ErrorKind::kInfeasible,
              "Gibbs solver did not converge; targets are likely outside the "
              "feasible moment set");
}

std::vector<PauliString> random_pauli_strings(int n_qubits, int count,
                                              std::uint64_t seed,
                                              std::string_view alphabet) {
  require(n_qubits >= 1, ErrorKind::kValidation, "need at least one qubit");
  require(count >= 1, ErrorKind::kValidation, "observable count must be >= 1");
  require(!alphabet.empty(), ErrorKind::kValidation, "empty Pauli alphabet");
  for (char c : alphabet)
    require(c == 'X' || c == 'Y' || c == 'Z', ErrorKind::kValidation,
            "alphabet letters must be among X, Y, Z");
  const double available = std::pow(static_cast<double>(alphabet.size() + 1), n_qubits) - 1.0;
  require(count <= available, ErrorKind::kValidation,
          "more observables requested than distinct Pauli strings exist");
  std::mt19937_64 rng(seed);
  std::string letters = "I" + std::string(alphabet);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::vector<PauliString> out;
  std::set<std::string> seen;
  while (static_cast<int>(out.size()) < count) {
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    for (auto& ch : s) ch = letters[pick(rng)];
    if (s == std::string(static_cast<std::size_t>(n_qubits), 'I')) continue;
    if (!seen.insert(s).second) continue;
    out.emplace_back(s);
  }
  return out;
}

}  // namespace rbmaxent
