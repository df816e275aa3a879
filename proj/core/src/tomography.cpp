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

#include "cmtlab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/SVD>

namespace cmt {

CVec haar_random_pure(int d, std::mt19937_64& rng) {
  if (d < 2) throw Error(ErrorCode::kInvalidDimension, "haar_random_pure needs d >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec v(d);
  for (int k = 0; k < d; ++k) {
    const double re = normal(rng);
    v(k) = cplx(re, normal(rng));
  }
  return v / v.norm();
}

CMat pure_density(const CVec& psi) { return psi * psi.adjoint(); }

MeasurementRecord generate_record(const CMat& rho0, const OperatorTimeline& timeline, double sigma,
                                  std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kPrecondition, "generate_record: sigma must be >= 0");
  require_same_dim(rho0.rows(), timeline.dim(), "generate_record: state vs timeline");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  MeasurementRecord rec;
  rec.sigma = sigma;
  rec.seed = seed;
  rec.values.resize(static_cast<Eigen::Index>(timeline.size()));
  for (std::size_t n = 0; n < timeline.size(); ++n) {
    // Tr(O ρ) for Hermitian O and ρ is the real part of Σ O_ij ρ_ji.
    const double signal = (timeline[n].array() * rho0.transpose().array()).sum().real();
    const double w = noise(rng);
    rec.values(static_cast<Eigen::Index>(n)) = signal + sigma * w;
  }
  return rec;
}

CovarianceData CovarianceData::build(const OperatorTimeline& timeline, const HermitianBasis& basis, double rank_tol,
                                     int rows) {
  require_same_dim(timeline.dim(), basis.dim(), "build_covariance: timeline vs basis");
  const int total = static_cast<int>(timeline.size());
  const int n = rows < 0 ? total : rows;
  if (n > total) throw Error(ErrorCode::kPrecondition, "build_covariance: more rows requested than timeline holds");
  RMat design(n, static_cast<Eigen::Index>(basis.size()));
  RVec offsets(n);
  const double d = static_cast<double>(basis.dim());
  for (int k = 0; k < n; ++k) {
    const CMat& op = timeline[static_cast<std::size_t>(k)];
    design.row(k) = basis.coefficients(op).transpose();
    offsets(k) = op.trace().real() / d;
  }
  CovarianceData out = from_design(std::move(design), rank_tol);
  out.offsets_ = std::move(offsets);
  return out;
}

CovarianceData CovarianceData::from_design(RMat design, double rank_tol) {
  if (!(rank_tol > 0.0)) throw Error(ErrorCode::kPrecondition, "rank_tol must be positive");
  CovarianceData out;
  out.design_ = std::move(design);
  out.rank_tol_ = rank_tol;
  out.offsets_ = RVec::Zero(out.design_.rows());
  out.factorize();
  return out;
}

CovarianceData CovarianceData::head(int n) const {
  if (n < 0 || n > design_.rows()) throw Error(ErrorCode::kPrecondition, "CovarianceData::head: row count out of range");
  CovarianceData out = from_design(design_.topRows(n), rank_tol_);
  out.offsets_ = offsets_.head(n);
  return out;
}

void CovarianceData::factorize() {
  const Eigen::Index m = design_.cols();
  if (design_.rows() == 0) {
    singular_.resize(0);
    rank_ = 0;
    left_.resize(0, 0);
    right_.resize(m, 0);
    return;
  }
  Eigen::BDCSVD<RMat> svd(design_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  singular_ = svd.singularValues();
  const double top = singular_.size() > 0 ? singular_(0) : 0.0;
  rank_ = 0;
  if (top > 0.0) {
    while (rank_ < singular_.size() && singular_(rank_) > rank_tol_ * top) ++rank_;
  }
  left_ = svd.matrixU().leftCols(rank_);
  right_ = svd.matrixV().leftCols(rank_);
}

RVec CovarianceData::support_eigenvalues() const { return singular_.head(rank_).array().square(); }

BlochVector ml_estimate(const RVec& values, const CovarianceData& cov) {
  if (values.size() == 0) throw Error(ErrorCode::kEmptyRecord, "ml_estimate: empty record");
  require_same_dim(values.size(), cov.rows(), "ml_estimate: record length vs design rows");
  const RVec proj = cov.left_vectors().transpose() * (values - cov.offsets());
  const RVec scaled = proj.cwiseQuotient(cov.singular_values().head(cov.rank()));
  return {cov.support_vectors() * scaled};
}

BlochVector ml_estimate(const MeasurementRecord& record, const CovarianceData& cov) {
  return ml_estimate(record.values, cov);
}

CMat project_to_density(const CMat& h) {
  const auto [vals, vecs] = eigh(0.5 * (h + h.adjoint()));
  const Eigen::Index n = vals.size();
  // Simplex projection of the spectrum: find τ with Σ max(λ_i − τ, 0) = 1.
  RVec sorted = vals.reverse();
  double cumulative = 0.0;
  double tau = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted(k);
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted(k) - candidate > 0.0) tau = candidate;
  }
  const RVec clipped = (vals.array() - tau).max(0.0);
  return vecs * clipped.cast<cplx>().asDiagonal() * vecs.adjoint();
}

ProjectionResult psd_project(const BlochVector& r_ml, const CovarianceData& cov, const HermitianBasis& basis,
                             const SolverOptions& options) {
  require_same_dim(r_ml.size(), static_cast<Eigen::Index>(basis.size()), "psd_project: Bloch length");
  require_same_dim(cov.params(), static_cast<Eigen::Index>(basis.size()), "psd_project: covariance size");

  ProjectionResult out;
  const CMat decoded = bloch_decode(r_ml, basis);
  if (eigh(decoded).values.minCoeff() >= 0.0) {
    out.r_bar = r_ml;
    out.rho_bar = decoded;
    out.converged = true;
    return out;
  }

  auto project = [&](const RVec& r) { return basis.coefficients(project_to_density(bloch_decode({r}, basis))); };

  const RMat& v = cov.support_vectors();
  if (cov.rank() == 0) {
    out.r_bar = {project(r_ml.components)};
    out.rho_bar = bloch_decode(out.r_bar, basis);
    out.converged = true;
    return out;
  }
  const RVec lam = cov.support_eigenvalues();
  const RVec w = lam / lam(0);
  const RVec& target = r_ml.components;

  auto grad = [&](const RVec& x) -> RVec { return v * w.cwiseProduct(v.transpose() * (x - target)); };
  auto objective = [&](const RVec& x) {
    const RVec c = v.transpose() * (x - target);
    return 0.5 * c.cwiseProduct(w).dot(c);
  };
  auto residual = [&](const RVec& x) {
    const RVec diff = x - project(x - grad(x));
    const RVec c = v.transpose() * diff;
    return std::sqrt(c.cwiseProduct(w).dot(c));
  };

  RVec x = project(target);
  RVec y = x;
  double fx = objective(x);
  double t = 1.0;
  double res = residual(x);
  // FISTA is not monotone in the KKT residual; keep the best checked iterate.
  RVec best = x;
  double best_res = res;
  bool reached = res <= options.kkt_tol;
  int deadline = reached ? options.polish_iter : options.max_iter;
  int it = 0;
  while (res > options.polish_tol && it < deadline) {
    ++it;
    RVec xn = project(y - grad(y));
    const double fn = objective(xn);
    if (fn > fx) {
      t = 1.0;
      y = x;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = xn + ((t - 1.0) / tn) * (xn - x);
      x = std::move(xn);
      fx = fn;
      t = tn;
    }
    if (it % 5 == 0) {
      res = residual(x);
      if (res < best_res) {
        best = x;
        best_res = res;
      }
      if (!reached && res <= options.kkt_tol) {
        reached = true;
        deadline = it + options.polish_iter;
      }
    }
  }
  res = residual(x);
  if (res < best_res) {
    best = std::move(x);
    best_res = res;
  }
  out.r_bar = {std::move(best)};
  out.rho_bar = bloch_decode(out.r_bar, basis);
  out.iterations = it;
  out.residual = best_res;
  out.converged = best_res <= options.kkt_tol;
  return out;
}

double fidelity(const CVec& psi0, const CMat& rho_bar) {
  require_same_dim(psi0.size(), rho_bar.rows(), "fidelity: state vs density matrix");
  const double f = psi0.dot(rho_bar * psi0).real();
  return std::clamp(f, 0.0, 1.0);
}

double hilbert_schmidt_distance(const CVec& psi0, const CMat& rho_bar) {
  require_same_dim(psi0.size(), rho_bar.rows(), "hilbert_schmidt_distance: dims");
  const CMat diff = rho_bar - pure_density(psi0);
  return (diff.adjoint() * diff).trace().real();
}

Reconstructor::Reconstructor(const OperatorTimeline& timeline, const HermitianBasis& basis,
                             std::vector<int> prefix_lengths, double rank_tol, SolverOptions options)
    : basis_(basis), prefixes_(std::move(prefix_lengths)), options_(options) {
  require_same_dim(timeline.dim(), basis.dim(), "Reconstructor: timeline vs basis");
  const CovarianceData full = CovarianceData::build(timeline, basis, rank_tol);
  for (int n : prefixes_) {
    if (n < 1 || n > full.rows()) throw Error(ErrorCode::kPrecondition, "Reconstructor: prefix length out of range");
    if (cov_.count(n) == 0) cov_.emplace(n, full.head(n));
  }
}

const CovarianceData& Reconstructor::covariance(int prefix) const {
  const auto it = cov_.find(prefix);
  if (it == cov_.end()) throw Error(ErrorCode::kPrecondition, "Reconstructor: prefix was not prepared");
  return it->second;
}

ReconstructionResult Reconstructor::reconstruct(const RVec& record, int prefix, const CVec& psi0) const {
  const CovarianceData& cov = covariance(prefix);
  if (record.size() < prefix) throw Error(ErrorCode::kDimensionMismatch, "reconstruct: record shorter than prefix");
  ReconstructionResult out;
  out.r_ml = ml_estimate(RVec(record.head(prefix)), cov);
  ProjectionResult proj = psd_project(out.r_ml, cov, basis_, options_);
  out.r_bar = std::move(proj.r_bar);
  out.rho_bar = std::move(proj.rho_bar);
  out.solver_iters = proj.iterations;
  out.solver_residual = proj.residual;
  out.converged = proj.converged;
  out.fidelity = fidelity(psi0, out.rho_bar);
  return out;
}

std::vector<int> prefix_schedule(int n_max, int stride) {
  if (n_max < 1) throw Error(ErrorCode::kPrecondition, "prefix_schedule: need at least one measurement");
  if (stride < 1) throw Error(ErrorCode::kPrecondition, "prefix_schedule: stride must be positive");
  std::vector<int> out;
  for (int n = stride; n < n_max; n += stride) out.push_back(n);
  out.push_back(n_max);
  return out;
}

TomographyRun run_tomography(const ModelSpec& model, const CVec& psi0, const CMat& observable, int n_measurements,
                             double sigma, std::uint64_t seed, const TomographyOptions& options) {
  const UnitaryPropagator u = make_propagator(model);
  require_same_dim(psi0.size(), u.dim(), "run_tomography: state vs model");
  if (n_measurements < 1) throw Error(ErrorCode::kEmptyRecord, "run_tomography: need at least one measurement");
  const OperatorTimeline timeline = heisenberg_timeline(observable, u, n_measurements - 1);
  const HermitianBasis basis = gell_mann_basis(static_cast<int>(u.dim()));
  const MeasurementRecord record = generate_record(pure_density(psi0), timeline, sigma, seed);
  const Reconstructor rec(timeline, basis, prefix_schedule(n_measurements, options.stride), options.rank_tol,
                          options.solver);
  TomographyRun run;
  for (int n : rec.prefix_lengths()) {
    ReconstructionResult r = rec.reconstruct(record.values, n, psi0);
    run.steps.push_back(n);
    run.fidelity.push_back(r.fidelity);
    run.results.push_back(std::move(r));
  }
  return run;
}

}  // namespace cmt
