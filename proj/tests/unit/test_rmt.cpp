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

#include <algorithm>
#include <bitset>

#include "cmtlab/dynamics.hpp"
#include "cmtlab/rmt.hpp"
#include "test_support.hpp"

namespace cmt {
namespace {

using testing::max_diff;

double small_spacing_fraction(EnsembleKind kind, int dim, int samples) {
  int small = 0;
  int total = 0;
  for (int s = 0; s < samples; ++s) {
    const EnsembleSpec spec{kind, dim, {}, derive_seed(77, static_cast<std::uint64_t>(s))};
    const bool unitary = kind == EnsembleKind::kCUE || kind == EnsembleKind::kCOE;
    for (double g : normalized_spacings(sample_ensemble(spec), unitary)) {
      ++total;
      if (g < 0.1) ++small;
    }
  }
  return static_cast<double>(small) / total;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, k = 0;
  double d = 0.0;
  while (i < a.size() && k < b.size()) {
    const double x = std::min(a[i], b[k]);
    while (i < a.size() && a[i] <= x) ++i;
    while (k < b.size() && b[k] <= x) ++k;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(k) / b.size()));
  }
  return d;
}

TEST(Gaussian, GoeRealSymmetricGueHermitian) {
  const CMat goe = sample_gaussian({EnsembleKind::kGOE, 10, {}, 3});
  EXPECT_LT(goe.imag().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(max_diff(goe, goe.transpose()), 1e-15);
  const CMat gue = sample_gaussian({EnsembleKind::kGUE, 10, {}, 3});
  EXPECT_TRUE(is_hermitian(gue, 1e-15));
  EXPECT_GT(gue.imag().cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_THROW(sample_gaussian({EnsembleKind::kCUE, 4, {}, 0}), Error);
}

TEST(Gaussian, OffDiagonalVarianceIsHalf) {
  // (A + A^T)/2 with unit-variance A gives off-diagonal variance 1/2.
  double sum = 0.0;
  int n = 0;
  for (int s = 0; s < 200; ++s) {
    const CMat h = sample_gaussian({EnsembleKind::kGOE, 16, {}, static_cast<std::uint64_t>(s)});
    for (int r = 0; r < 16; ++r)
      for (int c = r + 1; c < 16; ++c) {
        sum += std::norm(h(r, c));
        ++n;
      }
  }
  EXPECT_NEAR(sum / n, 0.5, 0.02);
}

TEST(Circular, CueUnitaryCoeSymmetric) {
  for (int s = 0; s < 5; ++s) {
    const CMat u = sample_circular({EnsembleKind::kCUE, 9, {}, static_cast<std::uint64_t>(s)});
    EXPECT_TRUE(is_unitary(u, 1e-12));
    const CMat w = sample_circular({EnsembleKind::kCOE, 9, {}, static_cast<std::uint64_t>(s)});
    EXPECT_TRUE(is_unitary(w, 1e-12));
    EXPECT_LT(max_diff(w, w.transpose()), 1e-12);
    Eigen::ComplexEigenSolver<CMat> es(w, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) EXPECT_NEAR(std::abs(es.eigenvalues()(k)), 1.0, 1e-10);
  }
  EXPECT_THROW(sample_circular({EnsembleKind::kGOE, 4, {}, 0}), Error);
}

TEST(Circular, SameSeedSameSample) {
  const EnsembleSpec spec{EnsembleKind::kCUE, 6, {}, 42};
  EXPECT_EQ(sample_circular(spec), sample_circular(spec));
}

TEST(Circular, HaarFirstMomentMatchesUniform) {
  std::mt19937_64 rng(9);
  const int d = 5;
  double sum = 0.0;
  const int n = 4000;
  for (int s = 0; s < n; ++s) sum += std::norm(haar_unitary(d, rng)(0, 0));
  EXPECT_NEAR(sum / n, 1.0 / d, 0.02);
}

TEST(Circular, CueSpacingsInvariantUnderFixedRotation) {
  std::mt19937_64 rng(1234);
  const CMat fixed = haar_unitary(8, rng);
  std::vector<double> plain, rotated;
  for (int s = 0; s < 500; ++s) {
    const CMat u = sample_circular({EnsembleKind::kCUE, 8, {}, derive_seed(5, static_cast<std::uint64_t>(s))});
    for (double g : normalized_spacings(u, true)) plain.push_back(g);
    const CMat v = sample_circular({EnsembleKind::kCUE, 8, {}, derive_seed(6, static_cast<std::uint64_t>(s))});
    for (double g : normalized_spacings(fixed * v, true)) rotated.push_back(g);
  }
  const double n = static_cast<double>(plain.size());
  const double m = static_cast<double>(rotated.size());
  const double critical = 1.628 * std::sqrt((n + m) / (n * m));  // p = 0.01
  EXPECT_LT(ks_statistic(plain, rotated), critical);
}

TEST(Spacings, LevelRepulsionBelowPoisson) {
  const double poisson = 1.0 - std::exp(-0.1);
  EXPECT_LT(small_spacing_fraction(EnsembleKind::kGOE, 64, 200), 0.5 * poisson);
  EXPECT_LT(small_spacing_fraction(EnsembleKind::kGUE, 64, 50), 0.5 * poisson);
  EXPECT_LT(small_spacing_fraction(EnsembleKind::kCOE, 64, 50), 0.5 * poisson);
  EXPECT_LT(small_spacing_fraction(EnsembleKind::kCUE, 64, 50), 0.5 * poisson);
}

TEST(Reflection, BitReversalInvolution) {
  const CMat p2 = reflection_operator(2);
  EXPECT_NEAR(p2(0, 0).real(), 1.0, 0.0);
  EXPECT_NEAR(p2(3, 3).real(), 1.0, 0.0);
  EXPECT_NEAR(p2(1, 2).real(), 1.0, 0.0);
  EXPECT_NEAR(p2(2, 1).real(), 1.0, 0.0);
  for (int L = 2; L <= 6; ++L) {
    const CMat p = reflection_operator(L);
    EXPECT_EQ(p * p, CMat::Identity(p.rows(), p.cols()));
  }
  EXPECT_THROW(reflection_operator(1), Error);
}

TEST(Reflection, MapsSitePaulisToMirroredSites) {
  const int L = 4;
  const CMat p = reflection_operator(L);
  for (int s = 1; s <= L; ++s) {
    EXPECT_LT(max_diff(p * site_pauli(L, s, Axis::kY) * p, site_pauli(L, L + 1 - s, Axis::kY)), 1e-15);
  }
}

TEST(Reflection, CommutesWithKickedIsingAndEigenspaceCounts) {
  for (int L = 2; L <= 5; ++L) {
    const CMat u = tki_floquet({L, 1.0, 1.4, 1.4}).matrix;
    EXPECT_LT(commutator(u, reflection_operator(L)).cwiseAbs().maxCoeff(), 1e-10);
    int palindromes = 0;
    for (int b = 0; b < (1 << L); ++b) {
      int rev = 0;
      for (int k = 0; k < L; ++k)
        if (b & (1 << k)) rev |= 1 << (L - 1 - k);
      if (rev == b) ++palindromes;
    }
    const int pairs = ((1 << L) - palindromes) / 2;
    const ReflectionBasis rb = reflection_eigenbasis(L);
    EXPECT_EQ(rb.plus_dim, palindromes + pairs);
    EXPECT_EQ(rb.minus_dim, pairs);
  }
  const ReflectionBasis rb5 = reflection_eigenbasis(5);
  EXPECT_EQ(rb5.plus_dim, 20);
  EXPECT_EQ(rb5.minus_dim, 12);
}

TEST(BlockDiagonal, CommutesWithReflectionAndIsUnitary) {
  const ReflectionBasis rb = reflection_eigenbasis(4);
  const CMat p = reflection_operator(4);
  for (EnsembleKind kind : {EnsembleKind::kCOE, EnsembleKind::kCUE, EnsembleKind::kGOE, EnsembleKind::kGUE}) {
    const EnsembleSpec spec{kind, 16, {rb.plus_dim, rb.minus_dim}, 11};
    const CMat m = block_diagonal_sample(spec, rb.vectors);
    EXPECT_LT(commutator(m, p).cwiseAbs().maxCoeff(), 1e-10);
    if (kind == EnsembleKind::kCOE || kind == EnsembleKind::kCUE) EXPECT_TRUE(is_unitary(m, 1e-10));
    else EXPECT_TRUE(is_hermitian(m, 1e-10));
  }
}

TEST(BlockDiagonal, InconsistentBlocksThrow) {
  const ReflectionBasis rb = reflection_eigenbasis(3);
  EXPECT_THROW(block_diagonal_sample({EnsembleKind::kCOE, 8, {3, 3}, 1}, rb.vectors), Error);
}

}  // namespace
}  // namespace cmt
