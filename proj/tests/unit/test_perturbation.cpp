// Copyright 2026 The cmtlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "cmtlab/perturbation.hpp"
#include "cmtlab/rmt.hpp"
#include "test_support.hpp"

namespace cmt {
namespace {

using testing::max_diff;

const KickedTop kTop{2.0, 3.0, kPi / 2};

TEST(PerturbedPair, ZeroShiftGivesIdenticalPropagators) {
  const PerturbedPair p = perturbed_kicked_top(kTop, 0.0);
  EXPECT_EQ(max_diff(p.u_true.matrix, p.u_model.matrix), 0.0);
}

TEST(PerturbedPair, DifferenceGrowsLinearlyForSmallShift) {
  const double a = (perturbed_kicked_top(kTop, 1e-4).u_true.matrix - kicked_top_floquet(kTop).matrix).norm();
  const double b = (perturbed_kicked_top(kTop, 2e-4).u_true.matrix - kicked_top_floquet(kTop).matrix).norm();
  EXPECT_NEAR(b / a, 2.0, 1e-3);
  const PerturbedPair p = perturbed_kicked_top(kTop, 0.2);
  EXPECT_DOUBLE_EQ(p.delta_lambda, 0.2);
  KickedTop shifted = kTop;
  shifted.lambda += 0.2;
  EXPECT_LT(max_diff(p.u_true.matrix, kicked_top_floquet(shifted).matrix), 1e-15);
}

class Diagnostics : public ::testing::Test {
 protected:
  void SetUp() override {
    o_ = angular_momentum_ops(kTop.j).y;
    const PerturbedPair p = perturbed_kicked_top(kTop, 0.05);
    true_ = heisenberg_timeline(o_, p.u_true, 20).steps();
    model_ = heisenberg_timeline(o_, p.u_model, 20).steps();
  }
  CMat o_;
  std::vector<CMat> true_, model_;
};

TEST_F(Diagnostics, IdenticalOperatorsAtStart) {
  EXPECT_NEAR(operator_loschmidt_echo(true_[0], model_[0], o_), 1.0, 1e-12);
  EXPECT_NEAR(operator_relative_entropy(true_[0], model_[0]), 0.0, 1e-10);
  EXPECT_NEAR(operator_incompatibility(true_[0], model_[0], kTop.j), 0.0, 1e-20);
}

TEST_F(Diagnostics, BoundsHoldAlongTrajectory) {
  for (std::size_t n = 0; n < true_.size(); ++n) {
    EXPECT_LE(std::abs(operator_loschmidt_echo(true_[n], model_[n], o_)), 1.0 + 1e-12);
    EXPECT_GE(operator_relative_entropy(true_[n], model_[n]), 0.0);
    EXPECT_GE(operator_incompatibility(true_[n], model_[n], kTop.j), 0.0);
  }
  EXPECT_LT(operator_loschmidt_echo(true_.back(), model_.back(), o_), 1.0 - 1e-6);
}

TEST_F(Diagnostics, ErrorUnitaryFormMatchesCommutatorForm) {
  const PerturbedPair p = perturbed_kicked_top(kTop, 0.05);
  for (int n = 0; n <= 20; n += 4) {
    const CMat e = error_unitary(p.u_true.matrix, p.u_model.matrix, n);
    EXPECT_TRUE(is_unitary(e, 1e-10));
    const double direct = operator_incompatibility(true_[static_cast<std::size_t>(n)],
                                                   model_[static_cast<std::size_t>(n)], kTop.j);
    const double via_error = incompatibility_error_form(o_, e, 1.0 / (2.0 * std::pow(kTop.j, 4)));
    EXPECT_NEAR(direct, via_error, 1e-10) << n;
  }
  EXPECT_LT(max_diff(error_unitary(p.u_true.matrix, p.u_model.matrix, 0), CMat::Identity(5, 5)), 1e-15);
}

TEST_F(Diagnostics, ErrorUnitaryMovesAwayFromIdentityEarly) {
  const PerturbedPair p = perturbed_kicked_top(kTop, 0.01);
  const CMat id = CMat::Identity(5, 5);
  double prev = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double dist = (error_unitary(p.u_true.matrix, p.u_model.matrix, n) - id).norm();
    EXPECT_GT(dist, prev) << n;
    prev = dist;
  }
}

TEST(Incompatibility, ChainScaleAndValidation) {
  const CMat o = site_spin(2, 1, Axis::kZ);
  EXPECT_NEAR(chain_incompatibility_scale(o), 1.0 / (2.0 * 1.0 * 1.0), 1e-15);
  EXPECT_THROW(chain_incompatibility_scale(CMat::Zero(4, 4)), Error);
  EXPECT_THROW(operator_incompatibility(o, o, 0.0), Error);
  EXPECT_THROW(operator_loschmidt_echo(o, o, CMat::Zero(4, 4)), Error);
}

TEST(RelativeEntropy, DistinctOperatorsArePositive) {
  const AngularMomentum jm = angular_momentum_ops(1.0);
  EXPECT_GT(operator_relative_entropy(jm.x, jm.z), 1e-3);
}

TEST(FractionalPower, Endpoints) {
  const CMat u = sample_circular({EnsembleKind::kCUE, 4, {}, 3});
  EXPECT_LT(max_diff(fractional_power(u, 0.0), CMat::Identity(4, 4)), 1e-12);
  EXPECT_LT(max_diff(fractional_power(u, 1.0), u), 1e-10);
  const CMat half = fractional_power(u, 0.5);
  EXPECT_LT(max_diff(half * half, u), 1e-10);
  EXPECT_TRUE(is_unitary(half, 1e-10));
}

TEST(FractionalPower, DistanceFromIdentityIncreasesWithEta) {
  const CMat u = sample_circular({EnsembleKind::kCUE, 4, {}, 5});
  double prev = -1.0;
  for (double eta = 0.0; eta <= 1.0 + 1e-12; eta += 0.1) {
    const double dist = (fractional_power(u, eta) - CMat::Identity(4, 4)).norm();
    EXPECT_GT(dist, prev);
    prev = dist;
  }
}

TEST(FractionalPower, RejectsNonUnitary) { EXPECT_THROW(fractional_power(2.0 * CMat::Identity(2, 2), 0.5), Error); }

TEST(FractionalPower, PerturbedBasisStaysOrthonormal) {
  const HermitianBasis b = gell_mann_basis(4);
  const CMat u = sample_circular({EnsembleKind::kCUE, 4, {}, 7});
  for (double eta : {0.0, 0.3, 1.0}) {
    const HermitianBasis p = fractional_unitary_perturb(b, u, eta);
    for (std::size_t a = 0; a < p.size(); ++a) {
      EXPECT_NEAR(p.elements()[a].trace().real(), 0.0, 1e-12);
      for (std::size_t c = 0; c < p.size(); ++c) {
        const double g = (p.elements()[a] * p.elements()[c]).trace().real();
        EXPECT_NEAR(g, a == c ? 1.0 : 0.0, 1e-10);
      }
    }
  }
}

TEST(OrderedBasis, FidelityDegradesWithRotation) {
  std::mt19937_64 rng(11);
  const int d = 4;
  const HermitianBasis ideal = gell_mann_basis(d);
  const CMat u = sample_circular({EnsembleKind::kCUE, d, {}, 13});
  const std::vector<int> counts{d * d - 1};
  double mean0 = 0.0, mean1 = 0.0;
  for (int s = 0; s < 5; ++s) {
    const CVec psi = haar_random_pure(d, rng);
    const double f0 =
        ordered_basis_fidelity(psi, ideal, fractional_unitary_perturb(ideal, u, 0.0), SortOrder::kDescending, counts)[0];
    const double f1 =
        ordered_basis_fidelity(psi, ideal, fractional_unitary_perturb(ideal, u, 0.5), SortOrder::kDescending, counts)[0];
    EXPECT_NEAR(f0, 1.0, 1e-6);
    mean0 += f0;
    mean1 += f1;
  }
  EXPECT_LT(mean1, mean0 - 1e-3);
}

TEST(OrderedBasis, CountValidation) {
  const HermitianBasis b = gell_mann_basis(2);
  CVec psi(2);
  psi << 1.0, 0.0;
  EXPECT_THROW(ordered_basis_fidelity(psi, b, b, SortOrder::kAscending, {0}), Error);
  EXPECT_THROW(ordered_basis_fidelity(psi, b, b, SortOrder::kAscending, {4}), Error);
}

TEST(Mismatched, SmallShiftApproachesIdealReconstruction) {
  const KickedTop top{1.5, 3.0, kPi / 2};
  const int d = 4;
  const int n = 2 * d * d;
  const CMat o = angular_momentum_ops(top.j).y;
  const HermitianBasis b = gell_mann_basis(d);
  const OperatorTimeline model_tl = heisenberg_timeline(o, kicked_top_floquet(top), n - 1);
  const Reconstructor model(model_tl, b, prefix_schedule(n, 8));
  std::mt19937_64 rng(21);
  const CVec psi = haar_random_pure(d, rng);
  const MeasurementRecord ideal_rec = generate_record(pure_density(psi), model_tl, 0.0, 1);
  const TomographyRun ideal = mismatched_reconstruction(ideal_rec, model, psi);
  double prev_gap = 1.0;
  for (double dl : {1e-2, 1e-3, 1e-4}) {
    const PerturbedPair p = perturbed_kicked_top(top, dl);
    const MeasurementRecord rec = generate_record(pure_density(psi), heisenberg_timeline(o, p.u_true, n - 1), 0.0, 1);
    const TomographyRun run = mismatched_reconstruction(rec, model, psi);
    double gap = 0.0;
    for (std::size_t k = 0; k < run.fidelity.size(); ++k) gap = std::max(gap, std::abs(run.fidelity[k] - ideal.fidelity[k]));
    EXPECT_LE(gap, prev_gap + 1e-9) << dl;
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-2);
}

TEST(Mismatched, ShortRecordThrows) {
  const KickedTop top{1.0, 2.0, kPi / 2};
  const CMat o = angular_momentum_ops(top.j).y;
  const OperatorTimeline tl = heisenberg_timeline(o, kicked_top_floquet(top), 9);
  const Reconstructor model(tl, gell_mann_basis(3), {10});
  const CVec psi = CVec::Unit(3, 0);
  MeasurementRecord rec = generate_record(pure_density(psi), tl, 0.0, 1);
  rec.values.conservativeResize(5);
  EXPECT_THROW(mismatched_reconstruction(rec, model, psi), Error);
}

}  // namespace
}  // namespace cmt
