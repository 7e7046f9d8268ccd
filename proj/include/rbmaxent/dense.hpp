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

// Small-scale dense statevector / density-matrix engine. Everything here is
// exponential in the qubit count and exists to produce targets and exact
// reference values for the sampled RBM path.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbmaxent/common.hpp"

namespace rbmaxent {

/// Tensor product of single-qubit Paulis, one letter per qubit ("XIZY").
class PauliString {
 public:
  PauliString() = default;
  /// Throws kValidation on letters outside {I, X, Y, Z} or an empty string.
  explicit PauliString(std::string_view letters);

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& identifier() const { return letters_; }
  char operator[](int i) const { return letters_[static_cast<std::size_t>(i)]; }
  bool is_identity() const;
  bool is_diagonal() const { return x_mask_ == 0; }

  /// Bit masks over basis indices (qubit 0 = most significant bit).
  std::uint64_t x_mask() const { return x_mask_; }  ///< X or Y positions
  std::uint64_t y_mask() const { return y_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }  ///< Z positions only
  int y_count() const { return y_count_; }

  /// Row r couples to column r ^ x_mask() with this matrix element.
  Complex element(std::uint64_t row) const;
  /// Symplectic commutation test.
  bool commutes_with(const PauliString& other) const;
  /// Full 2^n x 2^n matrix.
  MatrixXc matrix() const;
  /// Pads with identities on `extra` trailing qubits.
  PauliString extended(int extra) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::string letters_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t y_mask_ = 0;
  std::uint64_t z_mask_ = 0;
  int y_count_ = 0;
};

struct CircuitSpec {
  int qubit_count = 1;
  int layers = 1;
  std::uint64_t seed = 0;
};

inline int qubit_count_of(Eigen::Index dim) {
  int q = 0;
  while ((Eigen::Index{1} << q) < dim) ++q;
  return q;
}

/// Haar-random d x d unitary (QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out).
MatrixXc haar_unitary(int dim, std::mt19937_64& rng);

/// Applies a 2x2 (one target) or 4x4 (two targets) unitary. For two targets
/// the first one is the more significant bit of the gate index.
StateVector apply_gate(const StateVector& state, const MatrixXc& gate,
                       std::span<const int> targets);
StateVector apply_cnot(const StateVector& state, int control, int target);

/// Layers of Haar single-qubit gates on every qubit, each followed by the
/// CNOT(i, i+1) cascade, applied to |0...0>.
StateVector random_circuit_state(const CircuitSpec& spec,
                                 int max_qubits = kDefaultDenseCap);

/// Reduced state on `keep` (ascending qubit order is used for the result).
DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Tr(rho P) using the one-nonzero-per-row structure of Pauli strings.
Real pauli_expectation_exact(const DensityMatrix& rho, const PauliString& obs);

struct EntropyOrder {
  int alpha = 2;
  bool von_neumann = false;
  static EntropyOrder renyi(int a) { return {a, false}; }
  static EntropyOrder vne() { return {1, true}; }
};

/// Entropy in bits. Renyi orders must be >= 2.
Real entropy_exact(const DensityMatrix& rho, EntropyOrder order);
/// Tr(rho^n) from the spectrum.
Real trace_power_exact(const DensityMatrix& rho, int n);

struct DensityCheck {
  Real hermiticity_error = 0;  ///< max |rho - rho^dagger|
  Real trace_error = 0;        ///< |Tr rho - 1|
  Real min_eigenvalue = 0;
  bool ok(Real herm_tol = 1e-10, Real trace_tol = 1e-10,
          Real psd_tol = 1e-9) const {
    return hermiticity_error < herm_tol && trace_error < trace_tol &&
           min_eigenvalue >= -psd_tol;
  }
};

DensityCheck check_density_matrix(const DensityMatrix& rho);

/// 0.5 * || a - b ||_1
Real trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct GibbsOptions {
  int max_iterations = 500;
  Real tolerance = 1e-10;  ///< on the max constraint residual
  Real damping = 0.5;      ///< step factor applied while the residual grows
  Real commute_tol = 1e-10;
};

struct GibbsSolution {
  DensityMatrix rho;
  VectorXr lambdas;  ///< rho = exp(-sum_k lambda_k O_k) / Z
  int iterations = 0;
  Real max_residual = 0;
};

/// Exact maximum-entropy state for mutually commuting observables, by damped
/// Newton iteration on the convex dual log Z(lambda) + lambda . targets.
/// Throws kNonCommuting or kInfeasible.
GibbsSolution gibbs_maxent_solve(std::span<const PauliString> observables,
                                 std::span<const Real> targets,
                                 const GibbsOptions& options = {});

/// Distinct random non-identity Pauli strings over n qubits. `alphabet`
/// restricts the non-identity letters (e.g. "Z" for commuting diagonal sets).
std::vector<PauliString> random_pauli_strings(int n_qubits, int count,
                                              std::uint64_t seed,
                                              std::string_view alphabet = "XYZ");

}  // namespace rbmaxent
