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

#include "cmtlab/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace cmt {

namespace {

void check_dim(int d) {
  if (d < 1) throw Error(ErrorCode::kInvalidDimension, "ensemble dimension must be positive");
}

int reverse_bits(int s, int L) {
  int r = 0;
  for (int k = 0; k < L; ++k) r |= ((s >> k) & 1) << (L - 1 - k);
  return r;
}

}  // namespace

CMat haar_unitary(int d, std::mt19937_64& rng) {
  check_dim(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat z(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) z(r, c) = cplx(normal(rng), normal(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ() * CMat::Identity(d, d);
  const CMat& packed = qr.matrixQR();
  for (int k = 0; k < d; ++k) {
    const cplx rkk = packed(k, k);
    const double mag = std::abs(rkk);
    q.col(k) *= mag > 0.0 ? rkk / mag : cplx(1.0);
  }
  return q;
}

CMat sample_gaussian(const EnsembleSpec& spec) {
  check_dim(spec.dim);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = spec.dim;
  CMat a(d, d);
  switch (spec.kind) {
    case EnsembleKind::kGOE:
      for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) a(r, c) = normal(rng);
      return 0.5 * (a + a.transpose()).eval();
    case EnsembleKind::kGUE:
      for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
          const double re = normal(rng);
          a(r, c) = cplx(re, normal(rng));
        }
      return 0.5 * (a + a.adjoint()).eval();
    default:
      throw Error(ErrorCode::kPrecondition, "sample_gaussian needs GOE or GUE");
  }
}

CMat sample_circular(const EnsembleSpec& spec) {
  check_dim(spec.dim);
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case EnsembleKind::kCUE:
      return haar_unitary(spec.dim, rng);
    case EnsembleKind::kCOE: {
      const CMat v = haar_unitary(spec.dim, rng);
      return v.transpose() * v;
    }
    default:
      throw Error(ErrorCode::kPrecondition, "sample_circular needs CUE or COE");
  }
}

CMat sample_ensemble(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::kGOE:
    case EnsembleKind::kGUE:
      return sample_gaussian(spec);
    case EnsembleKind::kCUE:
    case EnsembleKind::kCOE:
      return sample_circular(spec);
  }
  throw Error(ErrorCode::kPrecondition, "unknown ensemble kind");
}

CMat reflection_operator(int L) {
  if (L < 2 || L > 20) throw Error(ErrorCode::kPrecondition, "reflection_operator needs 2 <= L <= 20");
  const int d = 1 << L;
  CMat p = CMat::Zero(d, d);
  for (int s = 0; s < d; ++s) p(reverse_bits(s, L), s) = 1.0;
  return p;
}

ReflectionBasis reflection_eigenbasis(int L) {
  if (L < 2 || L > 20) throw Error(ErrorCode::kPrecondition, "reflection_eigenbasis needs 2 <= L <= 20");
  const int d = 1 << L;
  std::vector<CVec> plus, minus;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int s = 0; s < d; ++s) {
    const int r = reverse_bits(s, L);
    if (r < s) continue;
    CVec v = CVec::Zero(d);
    if (r == s) {
      v(s) = 1.0;
      plus.push_back(v);
      continue;
    }
    v(s) = r2;
    v(r) = r2;
    plus.push_back(v);
    v(r) = -r2;
    minus.push_back(v);
  }
  ReflectionBasis out;
  out.plus_dim = static_cast<int>(plus.size());
  out.minus_dim = static_cast<int>(minus.size());
  out.vectors.resize(d, d);
  int col = 0;
  for (const CVec& v : plus) out.vectors.col(col++) = v;
  for (const CVec& v : minus) out.vectors.col(col++) = v;
  return out;
}

CMat block_diagonal_sample(const EnsembleSpec& spec, const CMat& basis_change) {
  if (spec.block_dims.empty()) throw Error(ErrorCode::kPrecondition, "block_diagonal_sample needs block_dims");
  const int total = std::accumulate(spec.block_dims.begin(), spec.block_dims.end(), 0);
  if (total != spec.dim) {
    throw Error(ErrorCode::kDimensionMismatch, "block_dims sum to " + std::to_string(total) + ", expected " +
                                                   std::to_string(spec.dim));
  }
  require_same_dim(basis_change.rows(), spec.dim, "block_diagonal_sample: basis rows");
  require_same_dim(basis_change.cols(), spec.dim, "block_diagonal_sample: basis cols");
  CMat blocks = CMat::Zero(spec.dim, spec.dim);
  int offset = 0;
  for (std::size_t b = 0; b < spec.block_dims.size(); ++b) {
    const int n = spec.block_dims[b];
    if (n < 1) throw Error(ErrorCode::kPrecondition, "block dimensions must be positive");
    EnsembleSpec sub{spec.kind, n, {}, derive_seed(spec.seed, b + 1)};
    blocks.block(offset, offset, n, n) = sample_ensemble(sub);
    offset += n;
  }
  return basis_change * blocks * basis_change.adjoint();
}

std::vector<double> normalized_spacings(const CMat& m, bool unitary) {
  std::vector<double> levels;
  if (unitary) {
    Eigen::ComplexEigenSolver<CMat> es(m, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) levels.push_back(std::arg(es.eigenvalues()(k)));
  } else {
    const RVec e = eigh(0.5 * (m + m.adjoint())).values;
    levels.assign(e.data(), e.data() + e.size());
  }
  std::sort(levels.begin(), levels.end());
  std::vector<double> gaps;
  for (std::size_t k = 1; k < levels.size(); ++k) gaps.push_back(levels[k] - levels[k - 1]);
  if (unitary && !levels.empty()) gaps.push_back(levels.front() + 2.0 * kPi - levels.back());
  if (gaps.empty()) return gaps;
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
  for (double& g : gaps) g /= mean;
  return gaps;
}

}  // namespace cmt
