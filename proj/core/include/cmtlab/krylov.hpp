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

// Krylov operator spreading: Liouvillian and unitary superoperators,
// Lanczos with full re-orthogonalization, Krylov amplitudes, complexity and
// entropy, and the dimension of the unitary (Arnoldi) Krylov space.

#pragma once

#include <vector>

#include "cmtlab/linalg.hpp"

namespace cmt {

/// Linear map on row-major vectorized d×d operators. Small systems hold the
/// d²×d² matrix; larger ones apply the map as d×d products.
class Superoperator {
 public:
  enum class Kind { kLiouvillian, kUnitaryConjugation };

  /// Largest d for which the dense d²×d² matrix is materialized.
  static constexpr int kDenseLimit = 16;

  /// L·O = [H, O]. Throws kPrecondition for non-Hermitian H.
  static Superoperator liouvillian(const CMat& h, bool force_dense = false);
  /// O ↦ U† O U, matrix U† ⊗ Uᵀ.
  static Superoperator unitary_conjugation(const CMat& u, bool force_dense = false);

  Kind kind() const noexcept { return kind_; }
  int op_dim() const noexcept { return static_cast<int>(gen_.rows()); }
  Eigen::Index dim() const noexcept { return gen_.rows() * gen_.rows(); }
  bool is_dense() const noexcept { return dense_.size() > 0; }

  CVec apply(const CVec& v) const;
  /// Dense matrix of the map; built on demand when not stored.
  CMat matrix() const;

 private:
  Superoperator(Kind kind, CMat gen, bool dense);

  Kind kind_;
  CMat gen_;
  CMat dense_;
};

/// H ⊗ I − I ⊗ Hᵀ.
CMat liouvillian_matrix(const CMat& h);
/// U† ⊗ Uᵀ.
CMat unitary_superoperator_matrix(const CMat& u);

struct KrylovBasis {
  CMat vectors;            // d² × K, orthonormal columns Q_0..Q_{K−1}
  std::vector<double> b;   // b_1..b_{K−1}
  int dim() const noexcept { return static_cast<int>(vectors.cols()); }
};

/// Default termination threshold on b_k for normalized Krylov vectors,
/// equivalent to 1e-8·‖O‖ on vectors carrying the norm of O.
inline constexpr double kKrylovTermTol = 1e-8;

/// Lanczos recursion on the Liouvillian with two Gram-Schmidt passes against
/// every earlier vector; stops when b_k ≤ term_tol.
KrylovBasis lanczos_full_orth(const Superoperator& liouvillian, const CMat& observable,
                              double term_tol = kKrylovTermTol);

/// e^{iHt} O e^{−iHt}.
CMat heisenberg_evolve(const CMat& h, const CMat& observable, double t);

struct KrylovAmplitudes {
  std::vector<double> phi;
};

/// φ_k = i^{−k}(Q_k|O(t))/‖O(t)‖. Throws kConsistency when any imaginary
/// residue exceeds 1e-6 or Σφ_k² misses 1 by more than 1e-6; either signals
/// a basis built from another H or O.
KrylovAmplitudes krylov_amplitudes(const CMat& evolved, const KrylovBasis& basis);

/// Σ k φ_k².
double krylov_complexity(const KrylovAmplitudes& amp);
/// −Σ φ_k² ln φ_k², 0 ln 0 = 0.
double krylov_entropy(const KrylovAmplitudes& amp);

/// Dimension of span{U†ⁿ O Uⁿ}: Householder QR with column pivoting of the
/// first 2d² orbit vectors of U† ⊗ Uᵀ; pivots at or below term_tol times the
/// largest are dropped. The plain Arnoldi recursion divides by every residual
/// and amplifies rounding until it invents directions, so it is not used.
/// Throws kPrecondition for d > 32.
int arnoldi_unitary_dim(const CMat& u, const CMat& observable, double term_tol = kKrylovTermTol);

}  // namespace cmt
