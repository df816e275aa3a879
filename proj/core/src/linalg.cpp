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

#include "cmtlab/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace cmt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kZeroOperator: return "zero-operator";
    case ErrorCode::kPrecondition: return "precondition-violation";
    case ErrorCode::kConsistency: return "consistency-error";
    case ErrorCode::kEmptyRecord: return "empty-record";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kUnknownObservable: return "unknown-observable";
  }
  return "unknown-error";
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(where) + " (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const CMat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - CMat::Identity(u.rows(), u.cols())) <= tol;
}

CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

CMat dagger(const CMat& a) { return a.adjoint(); }

HermitianEigen eigh(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

CMat expm_hermitian(const CMat& h, double t) {
  const auto [vals, vecs] = eigh(h);
  CVec phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases(k) = std::exp(-kI * (t * vals(k)));
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ (b + 0x632BE59BD9B4E019ULL));
  s = splitmix64(s ^ (c + 0x85157AF5ULL));
  return s;
}

}  // namespace cmt
