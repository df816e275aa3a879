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

#include "cmtlab/dynamics.hpp"
#include "cmtlab/quantifiers.hpp"
#include "test_support.hpp"

namespace cmt {
namespace {

// Eigenvalues of C^-1 from a direct symmetric eigensolve, restricted to the
// support sigma_i > tol * sigma_max, i.e. lambda_i > tol^2 * lambda_max.
std::vector<double> reference_spectrum(const CovarianceData& cov) {
  // Jacobi SVD of the design; squaring singular values keeps the small end
  // of the spectrum accurate, unlike an eigensolver on ÕᵀÕ.
  const RVec sv = Eigen::JacobiSVD<RMat>(cov.design()).singularValues();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cov.rank_tol() * sv(0)) out.push_back(sv(i) * sv(i));
  return out;
}

CovarianceData kicked_top_cov(double lambda, int n) {
  const KickedTop spec{3.0, lambda, kPi / 2};
  const OperatorTimeline tl = heisenberg_timeline(angular_momentum_ops(3.0).y, make_propagator(spec), n - 1);
  return CovarianceData::build(tl, gell_mann_basis(7));
}

TEST(Shannon, MatchesReferenceSpectrum) {
  for (double lambda : {0.5, 7.0}) {
    const CovarianceData cov = kicked_top_cov(lambda, 40);
    const auto lam = reference_spectrum(cov);
    double total = 0.0;
    for (double x : lam) total += x;
    double s = 0.0;
    for (double x : lam) s -= x / total * std::log(x / total);
    EXPECT_NEAR(shannon_entropy(cov), s, 1e-8);
    EXPECT_LE(shannon_entropy(cov), std::log(static_cast<double>(covariance_rank(cov))) + 1e-12);
    EXPECT_GE(shannon_entropy(cov), 0.0);
  }
}

TEST(Shannon, SingleRowAndUniformSpectrum) {
  EXPECT_NEAR(shannon_entropy(kicked_top_cov(2.5, 1)), 0.0, 1e-15);
  RMat design = RMat::Zero(5, 8);
  for (int k = 0; k < 5; ++k) design(k, k) = 2.0;
  EXPECT_NEAR(shannon_entropy(CovarianceData::from_design(design)), std::log(5.0), 1e-14);
  EXPECT_THROW(shannon_entropy(CovarianceData::from_design(RMat::Zero(2, 3))), Error);
}

TEST(Fisher, IdentityAndZeroLimits) {
  const int m = 8;
  const CovarianceData id = CovarianceData::from_design(RMat::Identity(m, m));
  EXPECT_NEAR(fisher_information(id, 1e-12), 1.0 / m, 1e-10);
  const CovarianceData zero = CovarianceData::from_design(RMat::Zero(3, m));
  EXPECT_NEAR(fisher_information(zero, 1e-3), 1e-3 / m, 1e-15);
  EXPECT_NEAR(default_fisher_reg(zero), 1e-6, 1e-20);
}

TEST(Fisher, MatchesDirectRegularizedInverse) {
  const CovarianceData cov = kicked_top_cov(7.0, 25);
  const double reg = 1e-3;
  const RMat c = cov.inv_cov();
  const RMat reg_inv = (c + reg * RMat::Identity(c.rows(), c.cols())).inverse();
  EXPECT_NEAR(fisher_information(cov, reg) * reg_inv.trace(), 1.0, 1e-9);
  EXPECT_NEAR(default_fisher_reg(cov), 1e-6 * Eigen::SelfAdjointEigenSolver<RMat>(c).eigenvalues().maxCoeff(), 1e-9);
}

TEST(Fisher, NonDecreasingWithTimelineLength) {
  const KickedTop spec{3.0, 2.5, kPi / 2};
  const OperatorTimeline tl = heisenberg_timeline(angular_momentum_ops(3.0).y, make_propagator(spec), 59);
  const HermitianBasis b = gell_mann_basis(7);
  const double reg = 1e-4;
  double last = 0.0;
  for (int n = 1; n <= 60; ++n) {
    const double j = fisher_information(CovarianceData::build(tl, b, kDefaultRankTol, n), reg);
    EXPECT_GE(j, last * (1.0 - 1e-12)) << n;
    last = j;
  }
}

TEST(Rank, SingleRowIsOne) { EXPECT_EQ(covariance_rank(kicked_top_cov(2.5, 1)), 1); }

TEST(MutualInformation, ReferenceAndScaling) {
  const int k = 4;
  RMat design = RMat::Zero(k, 6);
  for (int i = 0; i < k; ++i) design(i, i) = 1.0;
  EXPECT_NEAR(mutual_information(CovarianceData::from_design(design)), 0.0, 1e-15);
  const double c = 3.0;
  EXPECT_NEAR(mutual_information(CovarianceData::from_design(c * design)), k * std::log(c), 1e-12);

  const CovarianceData cov = kicked_top_cov(7.0, 30);
  const auto lam = reference_spectrum(cov);
  double logdet = 0.0, trace = 0.0;
  for (double x : lam) {
    logdet += std::log(x);
    trace += x;
  }
  EXPECT_NEAR(mutual_information(cov), 0.5 * logdet, 1e-6);
  const double kk = static_cast<double>(lam.size());
  EXPECT_LE(mutual_information(cov), 0.5 * kk * std::log(trace / kk) + 1e-12);
}

TEST(MutualInformation, AmGmEqualityForFlatSpectrum) {
  RMat design = RMat::Zero(3, 5);
  for (int i = 0; i < 3; ++i) design(i, i) = 1.7;
  const CovarianceData cov = CovarianceData::from_design(design);
  EXPECT_NEAR(mutual_information(cov), 1.5 * std::log(cov.trace() / 3.0), 1e-12);
}

TEST(OrderedBloch, MaximallyMixedAndCompletion) {
  const int d = 4;
  const HermitianBasis b = gell_mann_basis(d);
  const OrderedBloch mixed = ordered_bloch_values(CMat::Identity(d, d) / d, b, SortOrder::kDescending);
  for (std::size_t k = 0; k < mixed.partial_sums.size(); ++k) {
    EXPECT_NEAR(mixed.partial_sums[k], 0.0, 1e-15);
    EXPECT_NEAR(mixed.fidelity_bound[k], 1.0 / d, 1e-15);
  }
  std::mt19937_64 rng(1);
  const CVec psi = testing::random_complex(d, 1, rng).col(0).normalized();
  for (SortOrder o : {SortOrder::kDescending, SortOrder::kAscending}) {
    const OrderedBloch ob = ordered_bloch_values(psi * psi.adjoint(), b, o);
    EXPECT_NEAR(ob.partial_sums.back(), 1.0 - 1.0 / d, 1e-12);
    EXPECT_NEAR(ob.fidelity_bound.back(), 1.0, 1e-12);
  }
}

TEST(OrderedBloch, DescendingDominatesAscending) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 5;
    const HermitianBasis b = gell_mann_basis(d);
    const CVec psi = testing::random_complex(d, 1, rng).col(0).normalized();
    const CMat rho = psi * psi.adjoint();
    const OrderedBloch desc = ordered_bloch_values(rho, b, SortOrder::kDescending);
    const OrderedBloch asc = ordered_bloch_values(rho, b, SortOrder::kAscending);
    for (std::size_t k = 0; k < desc.partial_sums.size(); ++k) EXPECT_GE(desc.partial_sums[k], asc.partial_sums[k] - 1e-15);
  }
}

TEST(OrderedBloch, TiesBrokenByBasisIndex) {
  const HermitianBasis b = gell_mann_basis(3);
  const OrderedBloch ob = ordered_bloch_values(CMat::Identity(3, 3) / 3.0, b, SortOrder::kDescending);
  for (std::size_t k = 0; k < ob.order.size(); ++k) EXPECT_EQ(ob.order[k], static_cast<int>(k));
}

TEST(Alignment, ZeroVectorAndSingleRow) {
  const HermitianBasis b = gell_mann_basis(3);
  const OperatorTimeline tl = heisenberg_timeline(b[0], {CMat::Identity(3, 3), StepSemantics::kFloquet, 1.0}, 3);
  for (double v : state_operator_alignment(tl, b, {RVec::Zero(8)})) EXPECT_EQ(v, 0.0);
  RVec r = RVec::Zero(8);
  r(0) = 0.3;
  r(4) = 0.2;
  const std::vector<double> a = state_operator_alignment(tl, b, {r});
  EXPECT_NEAR(a[0], 0.09, 1e-15);
  EXPECT_NEAR(a[3], 4 * 0.09, 1e-14);
}

TEST(Series, LengthsMatchAndRankNonDecreasing) {
  const KickedTop spec{3.0, 7.0, kPi / 2};
  const OperatorTimeline tl = heisenberg_timeline(angular_momentum_ops(3.0).y, make_propagator(spec), 59);
  const QuantifierSeries qs = quantifier_series(tl, gell_mann_basis(7), {1, 5, 10, 30, 60});
  ASSERT_EQ(qs.times.size(), 5u);
  EXPECT_EQ(qs.shannon.size(), 5u);
  EXPECT_EQ(qs.fisher.size(), 5u);
  EXPECT_EQ(qs.rank.size(), 5u);
  EXPECT_EQ(qs.mutual_info.size(), 5u);
  for (std::size_t k = 1; k < 5; ++k) {
    EXPECT_GE(qs.rank[k], qs.rank[k - 1]);
    EXPECT_GE(qs.shannon[k], qs.shannon[k - 1] - 1e-12);
    EXPECT_GE(qs.fisher[k], qs.fisher[k - 1] * (1.0 - 1e-12));
  }
  EXPECT_EQ(qs.rank[0], 1);
  EXPECT_NEAR(qs.shannon[0], 0.0, 1e-15);
}

}  // namespace
}  // namespace cmt
