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

// Perturbed-dynamics diagnostics: tomography with a mismatched model,
// operator Loschmidt echo, operator relative entropy, operator
// incompatibility and its error-unitary form, and fractional basis rotations.
//
// Convention: the unprimed ("true") propagator generates the measurement
// record; the primed ("model") propagator builds the estimator's design.

#pragma once

#include <vector>

#include "cmtlab/dynamics.hpp"
#include "cmtlab/quantifiers.hpp"
#include "cmtlab/tomography.hpp"

namespace cmt {

struct PerturbedPair {
  UnitaryPropagator u_true;
  UnitaryPropagator u_model;
  double delta_lambda = 0.0;
};

/// u_true kicks with λ + δλ, u_model with λ; both share j and α.
PerturbedPair perturbed_kicked_top(const KickedTop& spec, double delta_lambda);

/// Reconstructs every prepared prefix of `model` from a record produced by
/// the true dynamics.
TomographyRun mismatched_reconstruction(const MeasurementRecord& record, const Reconstructor& model,
                                        const CVec& psi0);

/// Re Tr(O_n† O'_n) / Tr(O²).
double operator_loschmidt_echo(const CMat& evolved_true, const CMat& evolved_model, const CMat& observable);

/// D(ρ_true ‖ ρ_model) of the regularized operators; spectra clamped at
/// 1e-12 before the logarithm.
double operator_relative_entropy(const CMat& evolved_true, const CMat& evolved_model);

/// scale · Tr([A,B]† [A,B]).
double squared_commutator_norm(const CMat& a, const CMat& b, double scale);

/// Spin-j normalization 1/(2j⁴).
double operator_incompatibility(const CMat& evolved_true, const CMat& evolved_model, double j);

/// Default normalization for spin chains, 1/(2 Tr(O²)²).
double chain_incompatibility_scale(const CMat& observable);

/// U'ⁿ U†ⁿ with U' = model, U = true.
CMat error_unitary(const CMat& u_true, const CMat& u_model, int n);

/// scale · Tr(|[O, 𝒰†O𝒰]|²).
double incompatibility_error_form(const CMat& observable, const CMat& error_u, double scale);

/// U^η through the Schur form of U with eigenphases on (−π, π]. A phase
/// within 1e-12 of ±π is moved to π − 1e-12 first.
CMat fractional_power(const CMat& u, double eta);

/// E'_α = U^η E_α U^{η†} for every basis element.
HermitianBasis fractional_unitary_perturb(const HermitianBasis& basis, const CMat& u_r, double eta);

/// Zero-noise ordered reconstruction: the k-th measurement reads
/// Tr(ρ₀ E'_{α_k}) while the estimator assumes E_{α_k}, with α ordered by
/// |r_α| in the ideal basis. Returns the fidelity after each of the
/// scheduled measurement counts.
std::vector<double> ordered_basis_fidelity(const CVec& psi0, const HermitianBasis& ideal,
                                           const HermitianBasis& actual, SortOrder order,
                                           const std::vector<int>& counts, const SolverOptions& options = {});

}  // namespace cmt
