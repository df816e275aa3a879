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

// Information measures read from the covariance spectrum, ordered Bloch
// partial sums and the state-operator alignment.

#pragma once

#include <vector>

#include "cmtlab/tomography.hpp"

namespace cmt {

/// −Σ p_i ln p_i over the normalized support eigenvalues of C⁻¹.
/// Throws kZeroOperator when C⁻¹ vanishes.
double shannon_entropy(const CovarianceData& cov);

/// 1e-6 × λ_max(C⁻¹), or 1e-6 when C⁻¹ = 0.
double default_fisher_reg(const CovarianceData& cov);

/// 1 / Tr((C⁻¹ + reg·I)⁻¹) over the full parameter space. reg must be > 0.
double fisher_information(const CovarianceData& cov, double reg);
double fisher_information(const CovarianceData& cov);

int covariance_rank(const CovarianceData& cov);

/// ½ Σ ln λ_i over the support of C⁻¹.
double mutual_information(const CovarianceData& cov);

enum class SortOrder { kDescending, kAscending };

struct OrderedBloch {
  std::vector<int> order;               // basis indices in measurement order
  std::vector<double> partial_sums;     // Σ_{i≤k} r_i²
  std::vector<double> fidelity_bound;   // 1/d + partial sum
};

/// Sorts |r_α| (ties by index ascending) and accumulates r_α².
OrderedBloch ordered_bloch_values(const CMat& rho0, const HermitianBasis& basis, SortOrder direction);

/// Entry n is Σ_{m≤n} Σ_α (r_α Tr(O_m E_α))², i.e. Tr(S̃ᵀS̃) over the first
/// n+1 timeline rows.
std::vector<double> state_operator_alignment(const OperatorTimeline& timeline, const HermitianBasis& basis,
                                             const BlochVector& r);

struct QuantifierSeries {
  std::vector<int> times;  // number of timeline rows used
  std::vector<double> shannon;
  std::vector<double> fisher;
  std::vector<int> rank;
  std::vector<double> mutual_info;
};

/// Quantifiers of the covariance built from the first n rows for each n in
/// `times`. Fisher uses the default regularizer of the longest prefix so
/// that the series is comparable across n.
QuantifierSeries quantifier_series(const OperatorTimeline& timeline, const HermitianBasis& basis,
                                   const std::vector<int>& times, double rank_tol = kDefaultRankTol);

}  // namespace cmt
