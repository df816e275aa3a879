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

// Random-matrix baselines: Gaussian and circular ensembles, the bit-reversal
// reflection of a spin chain, and block-diagonal sampling in its eigenbasis.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cmtlab/linalg.hpp"

namespace cmt {

enum class EnsembleKind { kGOE, kGUE, kCUE, kCOE };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kCUE;
  int dim = 2;
  std::vector<int> block_dims;  // empty unless sampling block-diagonally
  std::uint64_t seed = 0;
};

/// GOE: (A+Aᵀ)/2 with real unit-normal A. GUE: (A+A†)/2 with independent
/// unit-normal real and imaginary parts.
CMat sample_gaussian(const EnsembleSpec& spec);

/// CUE: Haar unitary. COE: VᵀV with V Haar.
CMat sample_circular(const EnsembleSpec& spec);

/// Haar unitary from the QR factorization of a complex Gaussian matrix with
/// the phases of diag(R) divided out.
CMat haar_unitary(int d, std::mt19937_64& rng);

/// Dispatches on spec.kind.
CMat sample_ensemble(const EnsembleSpec& spec);

/// Permutation that reverses the site order of every computational basis
/// label on L spins.
CMat reflection_operator(int L);

/// Orthonormal eigenbasis of the reflection: the first `plus_dim` columns
/// span the +1 eigenspace, the remaining `minus_dim` the −1 eigenspace.
struct ReflectionBasis {
  CMat vectors;
  int plus_dim = 0;
  int minus_dim = 0;
};
ReflectionBasis reflection_eigenbasis(int L);

/// Samples one matrix per block from spec.kind, places them on the diagonal
/// in the given basis and rotates back: basis · blockdiag · basis†.
CMat block_diagonal_sample(const EnsembleSpec& spec, const CMat& basis_change);

/// Nearest-neighbour spacings of the sorted spectrum divided by their mean.
/// Unitary inputs use eigenphases on the circle.
std::vector<double> normalized_spacings(const CMat& m, bool unitary);

}  // namespace cmt
