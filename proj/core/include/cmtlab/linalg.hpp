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

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cmt {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  kInvalidDimension,
  kDimensionMismatch,
  kZeroOperator,
  kPrecondition,
  kConsistency,
  kEmptyRecord,
  kInvalidConfig,
  kUnknownObservable,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. Every precondition failure in cmtlab throws this
/// with a code the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Throws kDimensionMismatch unless a and b agree.
void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where);

double max_abs(const CMat& m);
bool is_hermitian(const CMat& m, double tol);
bool is_unitary(const CMat& u, double tol);

CMat commutator(const CMat& a, const CMat& b);
CMat dagger(const CMat& a);

// exp(-i t H) for Hermitian H, through the eigendecomposition of H.
CMat expm_hermitian(const CMat& h, double t);

// Hermitian eigendecomposition with ascending eigenvalues.
struct HermitianEigen {
  RVec values;
  CMat vectors;
};
HermitianEigen eigh(const CMat& h);

// Kronecker product a ⊗ b.
CMat kron(const CMat& a, const CMat& b);

// SplitMix64 step; used to derive independent RNG streams from one seed.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace cmt
