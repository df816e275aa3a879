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

#include "cmtlab/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace cmt {

namespace {

CMat clamped_log(const CMat& rho) {
  const auto [vals, vecs] = eigh(rho);
  RVec logs(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) logs(i) = std::log(std::max(vals(i), 1e-12));
  return vecs * logs.cast<cplx>().asDiagonal() * vecs.adjoint();
}

CMat matrix_power(const CMat& u, int n) {
  CMat out = CMat::Identity(u.rows(), u.cols());
  for (int k = 0; k < n; ++k) out = out * u;
  return out;
}

}  // namespace

PerturbedPair perturbed_kicked_top(const KickedTop& spec, double delta_lambda) {
  KickedTop shifted = spec;
  shifted.lambda += delta_lambda;
  return {kicked_top_floquet(shifted), kicked_top_floquet(spec), delta_lambda};
}

TomographyRun mismatched_reconstruction(const MeasurementRecord& record, const Reconstructor& model,
                                        const CVec& psi0) {
  const auto& prefixes = model.prefix_lengths();
  if (!prefixes.empty() && record.size() < *std::max_element(prefixes.begin(), prefixes.end())) {
    throw Error(ErrorCode::kDimensionMismatch, "mismatched_reconstruction: record shorter than model timeline");
  }
  TomographyRun run;
  for (int n : prefixes) {
    ReconstructionResult r = model.reconstruct(record.values, n, psi0);
    run.steps.push_back(n);
    run.fidelity.push_back(r.fidelity);
    run.results.push_back(std::move(r));
  }
  return run;
}

double operator_loschmidt_echo(const CMat& evolved_true, const CMat& evolved_model, const CMat& observable) {
  require_same_dim(evolved_true.rows(), evolved_model.rows(), "operator_loschmidt_echo");
  const double norm = (observable.adjoint() * observable).trace().real();
  if (norm == 0.0) throw Error(ErrorCode::kZeroOperator, "operator_loschmidt_echo: Tr(O^2) = 0");
  return (evolved_true.conjugate().array() * evolved_model.array()).sum().real() / norm;
}

double operator_relative_entropy(const CMat& evolved_true, const CMat& evolved_model) {
  require_same_dim(evolved_true.rows(), evolved_model.rows(), "operator_relative_entropy");
  const CMat rho = regularize_operator(evolved_true);
  const CMat sigma = regularize_operator(evolved_model);
  const CMat diff = clamped_log(rho) - clamped_log(sigma);
  const double d = (rho.array() * diff.transpose().array()).sum().real();
  // Klein's inequality makes D ≥ 0; negative values are rounding only.
  return std::max(d, 0.0);
}

double squared_commutator_norm(const CMat& a, const CMat& b, double scale) {
  require_same_dim(a.rows(), b.rows(), "squared_commutator_norm");
  return scale * commutator(a, b).squaredNorm();
}

double operator_incompatibility(const CMat& evolved_true, const CMat& evolved_model, double j) {
  if (!(j > 0.0)) throw Error(ErrorCode::kPrecondition, "operator_incompatibility: j must be positive");
  return squared_commutator_norm(evolved_true, evolved_model, 1.0 / (2.0 * std::pow(j, 4)));
}

double chain_incompatibility_scale(const CMat& observable) {
  const double t = observable.squaredNorm();
  if (t == 0.0) throw Error(ErrorCode::kZeroOperator, "chain_incompatibility_scale: Tr(O^2) = 0");
  return 1.0 / (2.0 * t * t);
}

CMat error_unitary(const CMat& u_true, const CMat& u_model, int n) {
  require_same_dim(u_true.rows(), u_model.rows(), "error_unitary");
  if (n < 0) throw Error(ErrorCode::kPrecondition, "error_unitary: negative power");
  return matrix_power(u_model, n) * matrix_power(u_true.adjoint(), n);
}

double incompatibility_error_form(const CMat& observable, const CMat& error_u, double scale) {
  return squared_commutator_norm(observable, error_u.adjoint() * observable * error_u, scale);
}

CMat fractional_power(const CMat& u, double eta) {
  if (!is_unitary(u, 1e-10)) throw Error(ErrorCode::kPrecondition, "fractional_power: input is not unitary");
  Eigen::ComplexSchur<CMat> schur(u);
  const CMat& t = schur.matrixT();
  const CMat& z = schur.matrixU();
  CVec phases(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    double theta = std::arg(t(k, k));
    if (std::abs(std::abs(theta) - kPi) < 1e-12) theta = kPi - 1e-12;
    phases(k) = std::exp(kI * (eta * theta));
  }
  return z * phases.asDiagonal() * z.adjoint();
}

HermitianBasis fractional_unitary_perturb(const HermitianBasis& basis, const CMat& u_r, double eta) {
  require_same_dim(u_r.rows(), basis.dim(), "fractional_unitary_perturb");
  const CMat v = fractional_power(u_r, eta);
  std::vector<CMat> rotated;
  rotated.reserve(basis.size());
  for (const CMat& e : basis.elements()) {
    CMat r = v * e * v.adjoint();
    rotated.push_back(0.5 * (r + r.adjoint()));
  }
  return HermitianBasis::from_elements(basis.dim(), std::move(rotated), 1e-9);
}

std::vector<double> ordered_basis_fidelity(const CVec& psi0, const HermitianBasis& ideal,
                                           const HermitianBasis& actual, SortOrder order,
                                           const std::vector<int>& counts, const SolverOptions& options) {
  require_same_dim(ideal.dim(), actual.dim(), "ordered_basis_fidelity: bases");
  const CMat rho0 = pure_density(psi0);
  const OrderedBloch ob = ordered_bloch_values(rho0, ideal, order);
  const RVec measured = actual.coefficients(rho0);
  const auto m = static_cast<Eigen::Index>(ideal.size());
  std::vector<double> out;
  for (int k : counts) {
    if (k < 1 || k > m) throw Error(ErrorCode::kPrecondition, "ordered_basis_fidelity: count out of range");
    RMat design = RMat::Zero(k, m);
    RVec values(k);
    for (int i = 0; i < k; ++i) {
      const int alpha = ob.order[static_cast<std::size_t>(i)];
      design(i, alpha) = 1.0;
      values(i) = measured(alpha);
    }
    const CovarianceData cov = CovarianceData::from_design(std::move(design));
    const BlochVector r_ml = ml_estimate(values, cov);
    const ProjectionResult proj = psd_project(r_ml, cov, ideal, options);
    out.push_back(fidelity(psi0, proj.rho_bar));
  }
  return out;
}

}  // namespace cmt
