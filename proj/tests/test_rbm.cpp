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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rbmaxent/dense.hpp"
#include "rbmaxent/rbm.hpp"
#include "test_util.hpp"

namespace rbmaxent {
namespace {

TEST(LogAmplitude, ZeroParamsIsHiddenCountTimesLog2) {
  const RbmParams p = RbmParams::zeros(4, 3);
  for (std::uint64_t i = 0; i < 16; ++i) {
    const Complex l = log_amplitude(p, spins_from_index(i, 4));
    EXPECT_NEAR(l.real(), 3 * std::log(2.0), 1e-14);
    EXPECT_NEAR(l.imag(), 0.0, 1e-14);
  }
  EXPECT_NEAR(3 * std::log(2.0), 2.0794, 1e-4);
}

TEST(LogAmplitude, LinearBiasTerm) {
  RbmParams p = RbmParams::zeros(3, 2);
  const Complex c(0.3, -0.2);
  p.a(0) = c;
  SpinConfig up(3), down(3);
  up << 1, -1, 1;
  down << -1, -1, 1;
  const Complex diff = log_amplitude(p, up) - log_amplitude(p, down);
  EXPECT_NEAR(std::abs(diff - 2.0 * c), 0.0, 1e-14);
}

TEST(LogAmplitude, MatchesHiddenUnitEnumeration) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    RbmParams p = RbmParams::random(3, 2, 0.7, rng);
    p.beta = 0.5 + 0.1 * rep;
    for (std::uint64_t i = 0; i < 8; ++i) {
      const Complex ref = oracle::psi_by_hidden_sum(p, i);
      const Complex got = std::exp(log_amplitude(p, spins_from_index(i, 3)));
      EXPECT_LT(std::abs(got - ref) / std::abs(ref), 1e-12);
    }
  }
}

TEST(LogAmplitude, StableForLargeAngles) {
  RbmParams p = RbmParams::zeros(2, 1);
  p.b(0) = Complex(29.0, 0.3);
  p.w(0, 0) = Complex(29.0, 0.0);
  p.w(1, 0) = Complex(29.0, 0.0);
  const Complex l = log_amplitude(p, spins_from_index(0, 2));
  EXPECT_TRUE(std::isfinite(l.real()));
  EXPECT_NEAR(l.real(), 87.0, 1e-9);
  const Complex z(-700.0, 1.0);
  EXPECT_NEAR(log_2cosh(z).real(), 700.0, 1e-9);
}

TEST(LogAmplitude, WrongLengthRejected) {
  EXPECT_ERROR_KIND(log_amplitude(RbmParams::zeros(3, 1), spins_from_index(0, 2)),
                    ErrorKind::kValidation);
}

TEST(AmplitudeRatio, IdentityAndUniform) {
  std::mt19937_64 rng(2);
  const RbmParams p = RbmParams::random(4, 3, 0.5, rng);
  const SpinConfig s = spins_from_index(5, 4);
  EXPECT_EQ(amplitude_ratio(p, s, s), Complex(1.0, 0.0));
  const RbmParams z = RbmParams::zeros(4, 3);
  EXPECT_NEAR(std::abs(amplitude_ratio(z, spins_from_index(1, 4), spins_from_index(9, 4)) -
                       Complex(1.0, 0.0)),
              0.0, 1e-15);
}

TEST(AmplitudeRatio, MatchesTwoCallQuotient) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const RbmParams p = RbmParams::random(4, 2, 0.8, rng);
    const SpinConfig a = spins_from_index(rng() % 16, 4);
    const SpinConfig b = spins_from_index(rng() % 16, 4);
    const Complex ref = std::exp(log_amplitude(p, a)) / std::exp(log_amplitude(p, b));
    EXPECT_LT(std::abs(amplitude_ratio(p, a, b) - ref) / std::abs(ref), 1e-12);
  }
}

TEST(DensityMatrix, ZeroParamsIsPlusState) {
  const RbmParams p = RbmParams::zeros(4, 2);
  const DensityMatrix rho = exact_density_matrix(p, Partition{2, 2});
  EXPECT_LT((rho.array() - 0.25).abs().maxCoeff(), 1e-12);
  EXPECT_NEAR(entropy_exact(rho, EntropyOrder::renyi(2)), 0.0, 1e-12);
}

TEST(DensityMatrix, NoEnvironmentIsPure) {
  std::mt19937_64 rng(4);
  const RbmParams p = RbmParams::random(3, 2, 0.6, rng);
  const DensityMatrix rho = exact_density_matrix(p, Partition{3, 0});
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho);
  EXPECT_NEAR(es.eigenvalues().maxCoeff(), 1.0, 1e-10);
}

TEST(DensityMatrix, MatchesGramOracle) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const RbmParams p = RbmParams::random(4, 3, 0.6, rng);
    const DensityMatrix rho = exact_density_matrix(p, Partition{2, 2});
    const MatrixXc ref = oracle::rho_from_psi(oracle::psi_vector(p), 2, 2);
    EXPECT_LT((rho - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(check_density_matrix(rho).ok());
  }
}

TEST(DensityMatrix, ValidByConstructionProperty) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 200; ++rep) {
    const int ns = 1 + rep % 3, ne = rep % 4, m = 1 + rep % 4;
    const Real stdv = 0.1 + 0.9 * (rep % 5) / 4.0;
    const RbmParams p = RbmParams::random(ns + ne, m, stdv, rng);
    const DensityCheck c = check_density_matrix(exact_density_matrix(p, Partition{ns, ne}));
    EXPECT_TRUE(c.ok()) << "rep " << rep << " herm " << c.hermiticity_error << " tr "
                        << c.trace_error << " min " << c.min_eigenvalue;
  }
}

TEST(DensityMatrix, CapEnforced) {
  EXPECT_ERROR_KIND(exact_density_matrix(RbmParams::zeros(15, 1), Partition{8, 7}),
                    ErrorKind::kCapExceeded);
}

TEST(Packing, RoundTripAndCount) {
  std::mt19937_64 rng(7);
  const RbmParams p = RbmParams::random(3, 2, 1.0, rng);
  const VectorXr x = pack_parameters(p);
  EXPECT_EQ(x.size(), parameter_count(3, 2));
  const RbmParams q = unpack_parameters(x, 3, 2);
  EXPECT_EQ(p.a, q.a);
  EXPECT_EQ(p.b, q.b);
  EXPECT_EQ(p.w, q.w);
  EXPECT_EQ(parameter_count(2, 1), 10);
  EXPECT_TRUE(pack_parameters(RbmParams::zeros(2, 1)).isZero(0));
  EXPECT_ERROR_KIND(unpack_parameters(VectorXr::Zero(9), 2, 1), ErrorKind::kValidation);
}

TEST(Packing, DocumentedOrder) {
  RbmParams p = RbmParams::zeros(2, 2);
  p.a(1) = Complex(1, 2);
  p.b(0) = Complex(3, 4);
  p.w(1, 0) = Complex(5, 6);
  const VectorXr x = pack_parameters(p);
  // Re a (2), Im a (2), Re b (2), Im b (2), Re W row-major (4), Im W (4)
  EXPECT_EQ(x(1), 1);
  EXPECT_EQ(x(3), 2);
  EXPECT_EQ(x(4), 3);
  EXPECT_EQ(x(6), 4);
  EXPECT_EQ(x(8 + 2), 5);
  EXPECT_EQ(x(12 + 2), 6);
  for (int i = 0; i < x.size(); ++i) {
    const ParamCoord c = coord_of(i, 2, 2);
    EXPECT_EQ(packed_index(c, 2, 2), i);
  }
}

TEST(DMatrix, ReABiasConvention) {
  const RbmParams p = RbmParams::zeros(2, 1);
  SpinConfig v(2);
  v << 1, -1;
  // Amplitude exponent +beta a.s: D = beta (v_k + v'_k), i.e. +2 for aligned up spins.
  const Complex d = d_matrix_entry(p, ParamCoord{ParamFamily::kReA, 0, 0}, v, v);
  EXPECT_NEAR(d.real(), 2.0, 1e-15);
  EXPECT_NEAR(d.imag(), 0.0, 1e-15);
}

TEST(DMatrix, ImAVanishesOnAgreeingSpins) {
  std::mt19937_64 rng(8);
  const RbmParams p = RbmParams::random(3, 2, 0.5, rng);
  const SpinConfig v = spins_from_index(3, 3);
  SpinConfig vp = v;
  vp(2) = -vp(2);
  EXPECT_NEAR(std::abs(d_matrix_entry(p, ParamCoord{ParamFamily::kImA, 0, 0}, v, vp)), 0.0,
              1e-15);
}

TEST(DMatrix, FiniteDifferenceAllFamiliesProperty) {
  std::mt19937_64 rng(9);
  const Real h = 1e-5;
  for (int rep = 0; rep < 50; ++rep) {
    RbmParams p = RbmParams::random(3, 2, 0.5, rng);
    p.beta = 0.7 + 0.01 * rep;
    const std::uint64_t vi = rng() % 8, wi = rng() % 8;
    const SpinConfig v = spins_from_index(vi, 3), vp = spins_from_index(wi, 3);
    const auto rho_vv = [&](const VectorXr& x) {
      const RbmParams q = unpack_parameters(x, 3, 2, p.beta);
      return oracle::psi_by_hidden_sum(q, vi) * std::conj(oracle::psi_by_hidden_sum(q, wi));
    };
    const VectorXr x = pack_parameters(p);
    const Complex r0 = rho_vv(x);
    for (int i = 0; i < x.size(); ++i) {
      VectorXr xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const Complex fd = (rho_vv(xp) - rho_vv(xm)) / (2 * h) / r0;
      const Complex an = d_matrix_entry(p, coord_of(i, 3, 2), v, vp);
      EXPECT_LT(std::abs(an - fd), 1e-6 * std::max(1.0, std::abs(an)))
          << "rep " << rep << " coord " << to_string(coord_of(i, 3, 2).family);
    }
  }
}

TEST(DMatrix, LogDerivativesAgreeWithEntries) {
  std::mt19937_64 rng(10);
  const RbmParams p = RbmParams::random(3, 2, 0.5, rng);
  const SpinBatch all = all_configs(3);
  const MatrixXc d = log_derivatives(p, all);
  for (int u = 0; u < 8; ++u)
    for (int w = 0; w < 8; ++w)
      for (int i = 0; i < d.cols(); ++i) {
        const Complex e = d_matrix_entry(p, coord_of(i, 3, 2), all.row(u).transpose(),
                                         all.row(w).transpose());
        EXPECT_NEAR(std::abs(e - (d(u, i) + std::conj(d(w, i)))), 0.0, 1e-14);
      }
}

TEST(DMatrix, InvalidCoordinateRejected) {
  EXPECT_ERROR_KIND(packed_index(ParamCoord{ParamFamily::kReW, 5, 0}, 3, 2),
                    ErrorKind::kValidation);
}

TEST(Validation, MagnitudeGuardAndClipping) {
  RbmParams p = RbmParams::zeros(2, 1);
  p.w(0, 0) = Complex(31.0, -40.0);
  EXPECT_ERROR_KIND(validate(p), ErrorKind::kValidation);
  EXPECT_EQ(clip_parameters(p), 2);
  EXPECT_EQ(p.w(0, 0), Complex(30.0, -30.0));
  EXPECT_NO_THROW(validate(p));
  EXPECT_ERROR_KIND(validate(RbmParams::zeros(3, 1), Partition{1, 1}), ErrorKind::kValidation);
}

}  // namespace
}  // namespace rbmaxent
