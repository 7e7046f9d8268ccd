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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rbmaxent {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXr = Vector<Real>;
using VectorXc = Vector<Complex>;
using MatrixXr = Matrix<Real>;
using MatrixXc = Matrix<Complex>;

/// Pure state over q qubits, 2^q amplitudes; qubit 0 is the most significant bit.
using StateVector = VectorXc;
/// Dense density matrix, same basis ordering as StateVector.
using DensityMatrix = MatrixXc;

/// A configuration of +1/-1 spins. Spin +1 is bit 0, spin -1 is bit 1.
using SpinConfig = VectorXr;
/// One spin configuration per row.
using SpinBatch = MatrixXr;

/// Default refusal threshold of the dense engine, in total qubits.
inline constexpr int kDefaultDenseCap = 14;

enum class ErrorKind {
  kValidation,
  kOutOfRange,
  kNonUnitary,
  kNonCommuting,
  kInfeasible,
  kCapExceeded,
  kNumerical,
  kEstimation,
  kParse,
  kIo,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

/// splitmix64 finalizer. Used to derive per-chain and per-replica seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Basis index -> spin configuration over n units (unit 0 = MSB).
SpinConfig spins_from_index(std::uint64_t index, int n);
/// Spin configuration -> basis index. Entries must be exactly +1 or -1.
std::uint64_t index_from_spins(const Eigen::Ref<const VectorXr>& spins);
/// All 2^n configurations, row i holds spins_from_index(i, n).
SpinBatch all_configs(int n);

inline constexpr Real kLn2 = 0.69314718055994530942;

}  // namespace rbmaxent
