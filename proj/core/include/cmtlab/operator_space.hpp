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

// Coordinates on the space of Hermitian operators: orthonormal traceless
// bases, Bloch vectors, row-major vectorization, and the modulus
// regularization that turns an observable into a density-like operator.

#pragma once

#include <cstddef>
#include <vector>

#include "cmtlab/linalg.hpp"

namespace cmt {

/// Ordered set of d²−1 traceless Hermitian d×d matrices, orthonormal under
/// Tr(E_α E_β) = δ_αβ.
///
/// The generalized Gell-Mann basis is ordered diagonal elements first
/// (ascending k), then the symmetric off-diagonal pairs, then the
/// antisymmetric pairs, each pair family in the loop order (row a > col b,
/// a ascending, b ascending). Bloch components and every ordered-measurement
/// experiment depend on this order.
class HermitianBasis {
 public:
  static HermitianBasis gell_mann(int d);

  /// Wraps arbitrary elements after checking hermiticity, tracelessness and
  /// orthonormality to `tol`. Throws kPrecondition on failure.
  static HermitianBasis from_elements(int d, std::vector<CMat> elements, double tol = 1e-10);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const CMat& operator[](std::size_t alpha) const { return elements_[alpha]; }
  const std::vector<CMat>& elements() const noexcept { return elements_; }
  bool is_gell_mann() const noexcept { return gell_mann_; }

  /// Real parts of Tr(op E_α) for every α. Exact for Hermitian op.
  RVec coefficients(const CMat& op) const;

  /// Σ_α c_α E_α.
  CMat combine(const RVec& c) const;

  /// Gram matrix G_αβ = Tr(E_α E_β) evaluated from the stored elements.
  CMat gram() const;

 private:
  HermitianBasis(int d, std::vector<CMat> elements, bool gell_mann);

  int dim_ = 0;
  std::vector<CMat> elements_;
  bool gell_mann_ = false;
  // Rows are the transposes of E_α in row-major vectorized form, so that
  // Tr(O E_α) = dual_.row(α) · vec(O). Only populated for general bases.
  CMat dual_;
};

struct BlochVector {
  RVec components;

  Eigen::Index size() const { return components.size(); }
  double norm_squared() const { return components.squaredNorm(); }
};

/// Row-major flattening of a d×d operator: entries[i*d + j] = O(i, j).
struct OperatorVec {
  CVec entries;
};

HermitianBasis gell_mann_basis(int d);

/// r_α = Tr(ρ E_α). ρ must be Hermitian.
BlochVector bloch_encode(const CMat& rho, const HermitianBasis& basis);

/// I/d + Σ r_α E_α; unit trace, Hermitian, not necessarily positive.
CMat bloch_decode(const BlochVector& r, const HermitianBasis& basis);

/// Hilbert-Schmidt inner product Tr(A† B).
cplx hs_inner(const CMat& a, const CMat& b);

OperatorVec vectorize(const CMat& op);
CMat devectorize(const OperatorVec& v);

/// Keeps the eigenvectors of O and replaces its spectrum by |D|/Tr|D|.
/// Throws kZeroOperator when O vanishes.
CMat regularize_operator(const CMat& op);

}  // namespace cmt
