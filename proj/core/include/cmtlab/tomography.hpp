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

// Continuous weak-measurement tomography: record synthesis, the design
// matrix and its covariance, maximum-likelihood Bloch estimates and the
// positivity-constrained reconstruction.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "cmtlab/dynamics.hpp"
#include "cmtlab/operator_space.hpp"

namespace cmt {

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultSigma = 0.1;

/// Normalized complex standard-normal vector.
CVec haar_random_pure(int d, std::mt19937_64& rng);
CMat pure_density(const CVec& psi);

struct MeasurementRecord {
  RVec values;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return values.size(); }
};

/// M_n = Tr(O_n ρ₀) + W_n, one entry per timeline operator, W_n ~ N(0, σ²).
MeasurementRecord generate_record(const CMat& rho0, const OperatorTimeline& timeline, double sigma,
                                  std::uint64_t seed);

/// Design matrix Õ_{nα} = Tr(O_n E_α) and the spectrum of C⁻¹ = ÕᵀÕ, read
/// from a thin SVD of Õ. Singular values at or below rank_tol·σ_max are
/// outside the support; every quantity below uses that one rule.
class CovarianceData {
 public:
  /// Uses the first `rows` timeline entries (all when rows < 0).
  static CovarianceData build(const OperatorTimeline& timeline, const HermitianBasis& basis,
                              double rank_tol = kDefaultRankTol, int rows = -1);
  static CovarianceData from_design(RMat design, double rank_tol = kDefaultRankTol);

  /// Covariance of the first n rows, keeping their offsets.
  CovarianceData head(int n) const;

  const RMat& design() const noexcept { return design_; }
  RMat inv_cov() const { return design_.transpose() * design_; }
  double rank_tol() const noexcept { return rank_tol_; }
  Eigen::Index rows() const noexcept { return design_.rows(); }
  Eigen::Index params() const noexcept { return design_.cols(); }

  /// All singular values of Õ, descending.
  const RVec& singular_values() const noexcept { return singular_; }
  int rank() const noexcept { return rank_; }
  /// Eigenvalues of C⁻¹ on its support (σ_i²), descending.
  RVec support_eigenvalues() const;
  /// Orthonormal eigenvectors of C⁻¹ on its support, params × rank.
  const RMat& support_vectors() const noexcept { return right_; }
  /// Matching left singular vectors, rows × rank.
  const RMat& left_vectors() const noexcept { return left_; }
  /// Tr(C⁻¹) = ‖Õ‖_F².
  double trace() const { return design_.squaredNorm(); }
  /// Tr(O_n)/d per row: the part of each reading that carries no state
  /// information. Zero for traceless observables and for from_design.
  const RVec& offsets() const noexcept { return offsets_; }

 private:
  CovarianceData() = default;
  void factorize();

  RMat design_;
  RVec offsets_;
  double rank_tol_ = kDefaultRankTol;
  RVec singular_;
  int rank_ = 0;
  RMat left_;
  RMat right_;
};

/// r_ML = C Õᵀ (M − offsets) with the pseudoinverse restricted to the support.
/// `values` must hold exactly cov.rows() entries.
BlochVector ml_estimate(const RVec& values, const CovarianceData& cov);
BlochVector ml_estimate(const MeasurementRecord& record, const CovarianceData& cov);

struct SolverOptions {
  double kkt_tol = 1e-7;
  int max_iter = 5000;
  // After kkt_tol is met the solver keeps iterating toward polish_tol for at
  // most polish_iter further steps.
  double polish_tol = 1e-10;
  int polish_iter = 500;
};

struct ProjectionResult {
  BlochVector r_bar;
  CMat rho_bar;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Closest density matrix to decode(r_ml) in the C⁻¹-weighted norm.
///
/// Accelerated projected gradient with adaptive restart on the objective
/// ½(x − r_ml)ᵀ W (x − r_ml), W = C⁻¹/λ_max. The projection decodes x, clips
/// the spectrum onto the probability simplex and re-encodes. The KKT
/// residual is ‖x − P(x − ∇f(x))‖ in the W norm.
ProjectionResult psd_project(const BlochVector& r_ml, const CovarianceData& cov, const HermitianBasis& basis,
                             const SolverOptions& options = {});

/// Euclidean projection of a Hermitian matrix onto unit-trace PSD matrices.
CMat project_to_density(const CMat& h);

/// ⟨ψ|ρ|ψ⟩ clamped to [0, 1].
double fidelity(const CVec& psi0, const CMat& rho_bar);

/// Tr((ρ̄ − |ψ⟩⟨ψ|)²) = 1 + Tr ρ̄² − 2F for unit ψ.
double hilbert_schmidt_distance(const CVec& psi0, const CMat& rho_bar);

struct ReconstructionResult {
  BlochVector r_ml;
  BlochVector r_bar;
  CMat rho_bar;
  double fidelity = 0.0;
  int solver_iters = 0;
  double solver_residual = 0.0;
  bool converged = true;
};

/// Reconstructs from record prefixes of a fixed timeline. Covariances for
/// every requested prefix are factorized once in the constructor, so one
/// instance serves any number of states and noise draws concurrently.
class Reconstructor {
 public:
  Reconstructor(const OperatorTimeline& timeline, const HermitianBasis& basis, std::vector<int> prefix_lengths,
                double rank_tol = kDefaultRankTol, SolverOptions options = {});

  const std::vector<int>& prefix_lengths() const noexcept { return prefixes_; }
  const CovarianceData& covariance(int prefix) const;
  const HermitianBasis& basis() const noexcept { return basis_; }

  /// Uses the first `prefix` record entries.
  ReconstructionResult reconstruct(const RVec& record, int prefix, const CVec& psi0) const;

 private:
  HermitianBasis basis_;
  std::vector<int> prefixes_;
  std::map<int, CovarianceData> cov_;
  SolverOptions options_;
};

struct TomographyOptions {
  double rank_tol = kDefaultRankTol;
  SolverOptions solver;
  int stride = 1;  // reconstruct every stride-th prefix, always including N
};

struct TomographyRun {
  std::vector<int> steps;  // prefix lengths n
  std::vector<double> fidelity;
  std::vector<ReconstructionResult> results;
};

/// Prefix lengths stride, 2·stride, …, always ending at n_max.
std::vector<int> prefix_schedule(int n_max, int stride);

/// Full pipeline: N measurements of O_0..O_{N−1} under the model's
/// propagator, reconstruction from every scheduled prefix.
TomographyRun run_tomography(const ModelSpec& model, const CVec& psi0, const CMat& observable, int n_measurements,
                             double sigma, std::uint64_t seed, const TomographyOptions& options = {});

}  // namespace cmt
