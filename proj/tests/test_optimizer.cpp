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
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rbmaxent/optimizer.hpp"
#include "test_util.hpp"

namespace rbmaxent {
namespace {

// Per-coordinate agreement: relative tolerance, absolute for tiny entries.
void expect_gradients_agree(const VectorXr& got, const VectorXr& ref, Real rtol, Real atol) {
  ASSERT_EQ(got.size(), ref.size());
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    const Real err = std::abs(got(i) - ref(i));
    EXPECT_TRUE(err <= atol || err <= rtol * std::abs(ref(i)))
        << "coordinate " << i << ": " << got(i) << " vs " << ref(i);
  }
}

// Dense S2 of the reduced system state, independent of the estimators.
Real oracle_s2(const RbmParams& p, const Partition& part) {
  const MatrixXc rho = oracle::rho_from_psi(oracle::psi_vector(p), part.n_sys, part.n_env);
  return -std::log2(oracle::trace_power(rho, 2));
}

Real oracle_expectation(const RbmParams& p, const Partition& part, const PauliString& obs) {
  const MatrixXc rho = oracle::rho_from_psi(oracle::psi_vector(p), part.n_sys, part.n_env);
  return (rho * obs.matrix()).trace().real();
}

// Single-hidden-unit RBM with psi(s, e) proportional to exp(i pi/4 s e): a
// maximally entangled qubit pair, so rho_sys = I/2 and <Z> = 0.
RbmParams bell_like() {
  RbmParams p = RbmParams::zeros(2, 1);
  const Complex w = std::acosh(Complex(0, 1)) / 2.0;
  p.w(0, 0) = w;
  p.w(1, 0) = w;
  return p;
}

ConstraintSet one_constraint(const std::string& obs, Real target, Real xi) {
  ConstraintSet c;
  c.entries.push_back({PauliString(obs), target, xi});
  return c;
}

// ----------------------------------------------------------------------- cost

TEST(Cost, Arithmetic) {
  EXPECT_EQ(cost(0.0, std::vector<Real>{0.0, 0.0}, std::vector<Real>{1.0, 3.0}), 0.0);
  EXPECT_DOUBLE_EQ(cost(2.0, std::vector<Real>{0.5}, std::vector<Real>{4.0}), -1.0);
}

TEST(Cost, MaximallyEntropicFeasibleStateReachesFloor) {
  const RbmParams p = bell_like();
  const Partition part{1, 1};
  const std::vector<Real> xi{5.0};
  EXPECT_NEAR(oracle_s2(p, part), 1.0, 1e-12);
  EXPECT_NEAR(exact_cost(p, part, one_constraint("Z", 0.0, 5.0), xi), -1.0, 1e-10);
}

TEST(XiScheduleTest, GrowthAndCap) {
  XiSchedule s;
  EXPECT_DOUBLE_EQ(s.at(0, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(s.at(9, 0.1), 0.1);
  EXPECT_DOUBLE_EQ(s.at(10, 0.1), 0.1 * 1.2);
  EXPECT_DOUBLE_EQ(s.at(25, 0.1), 0.1 * 1.2 * 1.2);
  EXPECT_DOUBLE_EQ(s.at(100000, 0.1), 100.0);
  s.xi_max = 0.01;
  EXPECT_ERROR_KIND(validate(s), ErrorKind::kValidation);
}

TEST(Constraints, Validation) {
  const Partition part{2, 1};
  ConstraintSet c;
  EXPECT_ERROR_KIND(validate(c, part), ErrorKind::kValidation);
  c.entries.push_back({PauliString("ZI"), 0.2, 1.0});
  validate(c, part);
  c.entries.push_back({PauliString("ZI"), 0.3, 1.0});
  EXPECT_ERROR_KIND(validate(c, part), ErrorKind::kValidation);
  c.entries.back() = {PauliString("XX"), 1.5, 1.0};
  EXPECT_ERROR_KIND(validate(c, part), ErrorKind::kValidation);
  c.entries.back() = {PauliString("XX"), 0.5, 0.0};
  EXPECT_ERROR_KIND(validate(c, part), ErrorKind::kValidation);
  c.entries.back() = {PauliString("XXI"), 0.5, 1.0};
  EXPECT_ERROR_KIND(validate(c, part), ErrorKind::kValidation);
}

// ------------------------------------------------------ finite differences

TEST(FiniteDifference, Quadratic) {
  VectorXr x(2);
  x << 1, 2;
  const VectorXr g = finite_difference_gradient([](const VectorXr& v) { return v.squaredNorm(); },
                                                x, 1e-5);
  EXPECT_NEAR(g(0), 2.0, 1e-8);
  EXPECT_NEAR(g(1), 4.0, 1e-8);
}

TEST(FiniteDifference, NonFiniteIsNumericalError) {
  const VectorXr x = VectorXr::Zero(2);
  EXPECT_ERROR_KIND(finite_difference_gradient(
                        [](const VectorXr& v) { return v(0) > 0 ? std::log(-1.0) : 0.0; }, x,
                        1e-3),
                    ErrorKind::kNumerical);
}

TEST(FiniteDifference, RichardsonSecondOrder) {
  std::mt19937_64 rng(1);
  const RbmParams p = RbmParams::random(3, 2, 0.5, rng);
  const Partition part{2, 1};
  const VectorXr x = pack_parameters(p);
  auto s2 = [&](const VectorXr& v) { return oracle_s2(unpack_parameters(v, 3, 2), part); };
  const VectorXr exact = grad_entropy_term_exact(p, part).grad_bits;
  const Real e1 = (finite_difference_gradient(s2, x, 2e-2) - exact).norm();
  const Real e2 = (finite_difference_gradient(s2, x, 1e-2) - exact).norm();
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
}

// ------------------------------------------------------ observable gradient

TEST(ObservableGradient, IdentityIsZero) {
  std::mt19937_64 rng(2);
  const RbmParams p = RbmParams::random(4, 2, 0.5, rng);
  const Partition part{2, 2};
  EXPECT_LT(grad_observable_term_exact(p, part, PauliString("II")).cwiseAbs().maxCoeff(), 1e-12);
  SamplerConfig c;
  c.n_samples = 500;
  const SampleSet s = mh_sample(p, c).samples;
  EXPECT_LT(grad_observable_term(p, part, PauliString("II"), s).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ObservableGradient, ExactMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  const char* kObs[] = {"XZ", "YI", "ZZ", "XY", "IY"};
  for (int rep = 0; rep < 10; ++rep) {
    const Partition part{2, 1 + rep % 2};
    const int nv = part.n_visible();
    const RbmParams p = RbmParams::random(nv, 2, 0.6, rng);
    const PauliString obs(kObs[rep % 5]);
    auto f = [&](const VectorXr& v) {
      return oracle_expectation(unpack_parameters(v, nv, 2), part, obs);
    };
    const VectorXr fd = finite_difference_gradient(f, pack_parameters(p), 1e-5);
    expect_gradients_agree(grad_observable_term_exact(p, part, obs), fd, 1e-6, 1e-9);
  }
}

TEST(ObservableGradient, SampledConvergesToExact) {
  std::mt19937_64 rng(4);
  const RbmParams p = RbmParams::random(4, 2, 0.4, rng);
  const Partition part{2, 2};
  const PauliString obs("XZ");
  SamplerConfig c;
  c.n_samples = 200000;
  c.seed = 3;
  const VectorXr g = grad_observable_term(p, part, obs, mh_sample(p, c).samples);
  const VectorXr ref = grad_observable_term_exact(p, part, obs);
  EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 0.03);
}

TEST(ObservableGradient, ReA0StepIncreasesZ0) {
  const RbmParams p = RbmParams::zeros(3, 2);
  const Partition part{2, 1};
  const PauliString z0("ZI");
  const VectorXr g = grad_observable_term_exact(p, part, z0);
  const int idx = packed_index({ParamFamily::kReA, 0, 0}, 3, 2);
  EXPECT_GT(g(idx), 0.1);
  VectorXr x = pack_parameters(p);
  x(idx) += 1e-2;
  EXPECT_GT(oracle_expectation(unpack_parameters(x, 3, 2), part, z0),
            oracle_expectation(p, part, z0) + 1e-3);
}

// ---------------------------------------------------------- entropy gradient

TEST(EntropyGradient, ExactMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Partition part{1 + rep % 2, 1 + rep % 3};
    const int nv = part.n_visible();
    const int m = 1 + rep % 3;
    const RbmParams p = RbmParams::random(nv, m, 0.6, rng);
    auto f = [&](const VectorXr& v) { return oracle_s2(unpack_parameters(v, nv, m), part); };
    const VectorXr fd = finite_difference_gradient(f, pack_parameters(p), 1e-5);
    const EntropyGradient g = grad_entropy_term_exact(p, part);
    EXPECT_NEAR(g.entropy_bits, oracle_s2(p, part), 1e-10);
    expect_gradients_agree(g.grad_bits, fd, 1e-5, 1e-8);
  }
}

TEST(EntropyGradient, PureProductStateMatchesFiniteDifferences) {
  const RbmParams p = RbmParams::zeros(3, 2);
  const Partition part{2, 1};
  auto f = [&](const VectorXr& v) { return oracle_s2(unpack_parameters(v, 3, 2), part); };
  const VectorXr fd = finite_difference_gradient(f, pack_parameters(p), 1e-5);
  const EntropyGradient g = grad_entropy_term_exact(p, part);
  EXPECT_NEAR(g.swap, 1.0, 1e-14);
  expect_gradients_agree(g.grad_bits, fd, 1e-5, 1e-8);
}

TEST(EntropyGradient, NoEnvironmentGivesZero) {
  std::mt19937_64 rng(6);
  const RbmParams p = RbmParams::random(3, 2, 0.7, rng);
  const Partition part{3, 0};
  const EntropyGradient g = grad_entropy_term_exact(p, part);
  EXPECT_NEAR(g.entropy_bits, 0.0, 1e-12);
  EXPECT_LT(g.grad_bits.cwiseAbs().maxCoeff(), 1e-8);
  SamplerConfig c;
  c.n_samples = 2000;
  const std::vector<SampleResult> r = sample_replicas(p, c, 2);
  const EntropyGradient gs = grad_entropy_term(p, part, r[0].samples, r[1].samples);
  EXPECT_LT(gs.grad_bits.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(EntropyGradient, SampledConvergesToExact) {
  std::mt19937_64 rng(7);
  const RbmParams p = RbmParams::random(4, 2, 0.4, rng);
  const Partition part{2, 2};
  SamplerConfig c;
  c.n_samples = 200000;
  c.seed = 9;
  const std::vector<SampleResult> r = sample_replicas(p, c, 2);
  const EntropyGradient gs = grad_entropy_term(p, part, r[0].samples, r[1].samples);
  const EntropyGradient ge = grad_entropy_term_exact(p, part);
  EXPECT_LT((gs.grad_bits - ge.grad_bits).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_NEAR(gs.entropy_bits, ge.entropy_bits, 0.05);
}

TEST(TracePowerGradient, ExactCubeMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const Partition part{2, 1 + rep % 2};
    const int nv = part.n_visible();
    const RbmParams p = RbmParams::random(nv, 2, 0.6, rng);
    for (int n : {2, 3, 4}) {
      auto f = [&](const VectorXr& v) {
        const MatrixXc rho = oracle::rho_from_psi(oracle::psi_vector(unpack_parameters(v, nv, 2)),
                                                  part.n_sys, part.n_env);
        return oracle::trace_power(rho, n);
      };
      const TracePowerGradient g = grad_trace_power_exact(p, part, n);
      expect_gradients_agree(g.grad, finite_difference_gradient(f, pack_parameters(p), 1e-5),
                             1e-5, 1e-9);
    }
  }
}

TEST(TracePowerGradient, SampledCubeConvergesToExact) {
  std::mt19937_64 rng(9);
  const RbmParams p = RbmParams::random(3, 2, 0.4, rng);
  const Partition part{1, 2};
  SamplerConfig c;
  c.n_samples = 100000;
  c.seed = 4;
  const std::vector<SampleResult> r = sample_replicas(p, c, 3);
  const std::vector<SampleSet> sets{r[0].samples, r[1].samples, r[2].samples};
  const TracePowerGradient gs = grad_trace_power(p, part, sets);
  const TracePowerGradient ge = grad_trace_power_exact(p, part, 3);
  EXPECT_NEAR(gs.value, ge.value, 0.02);
  EXPECT_LT((gs.grad - ge.grad).cwiseAbs().maxCoeff(), 0.05);
}

TEST(VneGradient, ExactMatchesFiniteDifferencesOfPolynomial) {
  std::mt19937_64 rng(10);
  const RbmParams p = RbmParams::random(4, 2, 0.5, rng);
  const Partition part{2, 2};
  const int nc = 6;
  auto f = [&](const VectorXr& v) {
    const MatrixXc rho =
        oracle::rho_from_psi(oracle::psi_vector(unpack_parameters(v, 4, 2)), 2, 2);
    std::vector<Real> powers;
    for (int n = 2; n <= nc; ++n) powers.push_back(oracle::trace_power(rho, n));
    return vne_from_powers(powers, nc);
  };
  const VneGradient g = grad_vne_term_exact(p, part, nc);
  EXPECT_NEAR(g.entropy_bits, f(pack_parameters(p)), 1e-10);
  expect_gradients_agree(g.grad_bits, finite_difference_gradient(f, pack_parameters(p), 1e-5),
                         1e-5, 1e-8);
}

// ------------------------------------------------------------- full gradient

TEST(CostGradient, MatchesFiniteDifferencesOnRandomInstances) {
  std::mt19937_64 rng(11);
  const int kSizes[2][3] = {{2, 1, 2}, {3, 2, 3}};
  for (int rep = 0; rep < 20; ++rep) {
    const auto& sz = kSizes[rep % 2];
    const Partition part{sz[0], sz[1]};
    const int nv = part.n_visible();
    const RbmParams p = RbmParams::random(nv, sz[2], 0.5, rng);
    const std::vector<PauliString> obs = random_pauli_strings(part.n_sys, 2, rng());
    ConstraintSet c;
    std::uniform_real_distribution<Real> u(-1, 1), ux(0.1, 5);
    std::vector<Real> xi;
    for (const auto& o : obs) {
      c.entries.push_back({o, u(rng), 1.0});
      xi.push_back(ux(rng));
    }
    auto f = [&](const VectorXr& v) {
      return exact_cost(unpack_parameters(v, nv, sz[2]), part, c, xi);
    };
    const VectorXr fd = finite_difference_gradient(f, pack_parameters(p), 1e-5);
    expect_gradients_agree(exact_cost_gradient(p, part, c, xi), fd, 1e-5, 1e-8);
  }
}

// ------------------------------------------------------------------ training

OptimizerConfig short_run(int epochs, EstimationMode mode = EstimationMode::kSampled) {
  OptimizerConfig o;
  o.epochs = epochs;
  o.samples_per_epoch = 500;
  o.estimation = mode;
  return o;
}

TEST(Train, DeterministicForFixedSeeds) {
  std::mt19937_64 rng(12);
  const RbmParams init = RbmParams::random(4, 2, 0.05, rng);
  const ConstraintSet c = one_constraint("XZ", 0.3, 1.0);
  SamplerConfig s;
  s.proposal = ProposalKind::kSurrogateTrotter;
  const TrainResult a = train(init, Partition{2, 2}, c, XiSchedule{}, short_run(15), s);
  const TrainResult b = train(init, Partition{2, 2}, c, XiSchedule{}, short_run(15), s);
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    EXPECT_EQ(a.trace.records[i].cost, b.trace.records[i].cost);
    EXPECT_EQ(a.trace.records[i].residuals, b.trace.records[i].residuals);
    EXPECT_EQ(a.trace.records[i].acceptance_rate, b.trace.records[i].acceptance_rate);
  }
  EXPECT_EQ(pack_parameters(a.params), pack_parameters(b.params));
}

TEST(Train, TraceCompleteAndFinite) {
  std::mt19937_64 rng(13);
  const RbmParams init = RbmParams::random(4, 2, 0.05, rng);
  ConstraintSet c = one_constraint("XZ", 0.3, 1.0);
  c.entries.push_back({PauliString("ZY"), -0.2, 1.0});
  OptimizerConfig o = short_run(30);
  o.entropy_mode = EntropyMode::kRenyi2ThenVne;
  o.vne_cutoff = 3;
  const TrainResult r = train(init, Partition{2, 2}, c, XiSchedule{}, o, SamplerConfig{});
  ASSERT_TRUE(r.ok) << r.status;
  ASSERT_EQ(r.trace.records.size(), 30U);
  for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
    const TrainingRecord& rec = r.trace.records[i];
    EXPECT_EQ(rec.epoch, static_cast<int>(i) + 1);
    EXPECT_TRUE(std::isfinite(rec.cost));
    EXPECT_TRUE(std::isfinite(rec.entropy_bits));
    EXPECT_TRUE(std::isfinite(rec.grad_norm));
    EXPECT_EQ(rec.residuals.size(), 2U);
    EXPECT_EQ(rec.xi_values.size(), 2U);
    EXPECT_EQ(rec.entropy_kind, i >= 27 ? "vne_poly" : "renyi2");
  }
}

TEST(Train, DivergenceHaltsWithPartialTrace) {
  // A huge inverse temperature leaves every gradient entry finite but
  // overflows the gradient norm.
  RbmParams init = RbmParams::zeros(3, 2);
  init.beta = 1e305;
  const TrainResult r = train(init, Partition{2, 1}, one_constraint("ZI", 0.5, 1.0),
                              XiSchedule{}, short_run(10), SamplerConfig{});
  EXPECT_FALSE(r.ok);
  EXPECT_LT(r.trace.records.size(), 10U);
  EXPECT_NE(r.status, "ok");
}

TEST(Train, SinglePointerConstraint) {
  std::mt19937_64 rng(14);
  const RbmParams init = RbmParams::random(4, 2, 0.05, rng);
  const Partition part{2, 2};
  OptimizerConfig o = short_run(300);
  o.samples_per_epoch = 1000;
  o.learning_rate = 0.05;
  const TrainResult r = train(init, part, one_constraint("ZI", 1.0, 1.0), XiSchedule{}, o,
                              SamplerConfig{});
  ASSERT_TRUE(r.ok) << r.status;
  EXPECT_LT(std::abs(oracle_expectation(r.params, part, PauliString("ZI")) - 1.0), 0.05);
  const Real s2 = oracle_s2(r.params, part);
  EXPECT_GE(s2, -1e-9);
  // Qubit 0 is pinned, so only qubit 1 can stay entangled.
  EXPECT_LE(s2, 1.0 + 0.05);
}

TEST(Train, PenaltyTighteningOnFeasibleInstance) {
  // Targets taken from a reachable random state, so the instance is feasible.
  std::mt19937_64 rng(15);
  const Partition part{2, 2};
  const RbmParams truth = RbmParams::random(4, 3, 0.6, rng);
  ConstraintSet c;
  for (const char* s : {"XI", "ZZ", "IY"})
    c.entries.push_back({PauliString(s), oracle_expectation(truth, part, PauliString(s)), 10.0});
  XiSchedule sched;
  sched.xi_init = 10.0;
  sched.xi_max = 1000.0;
  OptimizerConfig o = short_run(400, EstimationMode::kExactSum);
  o.learning_rate = 0.03;
  o.lr_final = 0.003;
  const TrainResult r = train(RbmParams::random(4, 3, 0.05, rng), part, c, sched, o,
                              SamplerConfig{});
  ASSERT_TRUE(r.ok) << r.status;
  for (const auto& e : c.entries)
    EXPECT_LT(std::abs(oracle_expectation(r.params, part, e.obs) - e.target), 0.05)
        << e.obs.identifier();
}

TEST(Train, FixedPointStaysPut) {
  // Bell-like start already satisfies <Z> = 0 at the entropy ceiling.
  const Partition part{1, 1};
  OptimizerConfig o = short_run(100);
  o.samples_per_epoch = 4000;
  const TrainResult r = train(bell_like(), part, one_constraint("Z", 0.0, 1.0), XiSchedule{}, o,
                              SamplerConfig{});
  ASSERT_TRUE(r.ok) << r.status;
  EXPECT_LT(std::abs(oracle_expectation(r.params, part, PauliString("Z"))), 0.05);
  EXPECT_GT(oracle_s2(r.params, part), 1.0 - 0.05);
}

TEST(Train, ValidationErrors) {
  const RbmParams init = RbmParams::zeros(3, 1);
  OptimizerConfig o = short_run(5);
  o.learning_rate = 0;
  EXPECT_ERROR_KIND(train(init, Partition{2, 1}, one_constraint("ZI", 0.1, 1.0), XiSchedule{}, o,
                          SamplerConfig{}),
                    ErrorKind::kValidation);
  EXPECT_ERROR_KIND(train(init, Partition{2, 1}, one_constraint("ZII", 0.1, 1.0), XiSchedule{},
                          short_run(5), SamplerConfig{}),
                    ErrorKind::kValidation);
}

}  // namespace
}  // namespace rbmaxent
