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

#include <cmath>
#include <cstdio>
#include <functional>

#include "cmtlab/experiments.hpp"
#include "cmtlab/krylov.hpp"
#include "cmtlab/perturbation.hpp"
#include "cmtlab/phase_space.hpp"
#include "cmtlab/quantifiers.hpp"

namespace cmt {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

CheckOutcome below(std::string name, double residual, double tol) {
  return {std::move(name), residual <= tol, "residual " + sci(residual) + " (tol " + sci(tol) + ")"};
}

CMat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = cplx(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

CheckOutcome check_gram() {
  double worst = 0.0;
  for (int d : {2, 3, 5, 8}) {
    const HermitianBasis b = gell_mann_basis(d);
    const Eigen::Index m = static_cast<Eigen::Index>(b.size());
    worst = std::max(worst, (b.gram() - CMat::Identity(m, m)).cwiseAbs().maxCoeff());
    for (std::size_t a = 0; a < b.size(); ++a) worst = std::max(worst, std::abs(b[a].trace()));
  }
  return below("gell-mann orthonormality", worst, 1e-12);
}

CheckOutcome check_bloch_roundtrip() {
  std::mt19937_64 rng(7);
  const HermitianBasis b = gell_mann_basis(6);
  CMat rho = random_hermitian(6, rng);
  rho += (1.0 - rho.trace().real()) / 6.0 * CMat::Identity(6, 6);
  const BlochVector r = bloch_encode(rho, b);
  const double parseval = std::abs(r.norm_squared() + 1.0 / 6.0 - (rho * rho).trace().real());
  const double round = (bloch_decode(r, b) - rho).cwiseAbs().maxCoeff();
  return below("bloch round trip and Parseval", std::max(parseval, round), 1e-12);
}

CheckOutcome check_regularize() {
  std::mt19937_64 rng(11);
  const CMat reg = regularize_operator(random_hermitian(5, rng));
  const auto eig = eigh(reg);
  double res = std::abs(reg.trace().real() - 1.0);
  if (eig.values.minCoeff() < -1e-12) res = std::max(res, -eig.values.minCoeff());
  return below("operator regularization is a density matrix", res, 1e-12);
}

CheckOutcome check_unitarity() {
  double worst = 0.0;
  const std::vector<ModelSpec> models{KickedTop{}, KickedIsing{}, TiltedIsing{}, XXZ{}};
  for (const auto& m : models) {
    const CMat u = make_propagator(m).matrix;
    worst = std::max(worst, (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff());
  }
  return below("propagators are unitary", worst, 1e-10);
}

CheckOutcome check_heisenberg_isometry() {
  const KickedTop kt{5.0, 7.0, 1.4};
  const AngularMomentum jm = angular_momentum_ops(kt.j);
  const OperatorTimeline tl = heisenberg_timeline(jm.y, make_propagator(kt), 100);
  const double n0 = jm.y.squaredNorm();
  double worst = 0.0;
  for (std::size_t n = 0; n < tl.size(); ++n) worst = std::max(worst, std::abs(tl[n].squaredNorm() - n0) / n0);
  return below("Heisenberg evolution preserves the HS norm", worst, 1e-10);
}

CheckOutcome check_classical_sphere() {
  SpinVector v{0.6, 0.0, 0.8};
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    v = classical_kicked_top_step(v, 6.5, kPi / 2);
    worst = std::max(worst, std::abs(v.norm() - 1.0));
  }
  return below("classical kicked top stays on the sphere", worst, 1e-12);
}

CheckOutcome check_xxz_magnetization() {
  const XXZ spec{4, 1.0, 1.1, 0.7, 2, 1.0, Axis::kZ};
  const CMat h = xxz_hamiltonian(spec);
  const CMat sz = collective_spin(4, Axis::kZ);
  return below("XXZ with a z impurity conserves S_z", commutator(h, sz).cwiseAbs().maxCoeff(), 1e-12);
}

CheckOutcome check_trace_identity() {
  const KickedTop kt{3.0, 2.5, kPi / 2};
  const CMat obs = angular_momentum_ops(kt.j).y;
  const int n = 60;
  const OperatorTimeline tl = heisenberg_timeline(obs, make_propagator(kt), n - 1);
  const CovarianceData cov = CovarianceData::build(tl, gell_mann_basis(7));
  const double expected = n * obs.squaredNorm();
  return below("Tr(C^-1) = N |O|^2", std::abs(cov.trace() - expected) / expected, 1e-10);
}

CheckOutcome check_rank_bound() {
  const KickedIsing spec{3, 1.0, 1.4, 1.4};
  const int d = 8;
  const OperatorTimeline tl = heisenberg_timeline(site_spin(3, 1, Axis::kY), make_propagator(spec), 99);
  const int rank = CovarianceData::build(tl, gell_mann_basis(d)).rank();
  const int bound = d * d - d + 1;
  return {"covariance rank bound", rank <= bound,
          "rank " + std::to_string(rank) + ", bound " + std::to_string(bound)};
}

CheckOutcome check_psd_idempotent() {
  std::mt19937_64 rng(3);
  const int d = 4;
  const HermitianBasis basis = gell_mann_basis(d);
  const CMat rho = pure_density(haar_random_pure(d, rng));
  const OperatorTimeline tl = random_unitary_timeline(random_hermitian(d, rng), d * d, 5);
  const CovarianceData cov = CovarianceData::build(tl, basis);
  const ProjectionResult p = psd_project(bloch_encode(rho, basis), cov, basis);
  return below("positivity projection fixes physical states", (p.rho_bar - rho).cwiseAbs().maxCoeff(), 1e-9);
}

CheckOutcome check_lanczos() {
  const TiltedIsing spec{3, 1.0, 1.4, 1.4, 1.0};
  const Superoperator l = Superoperator::liouvillian(ti_hamiltonian(spec));
  const KrylovBasis kb = lanczos_full_orth(l, site_spin(3, 1, Axis::kY));
  const Eigen::Index k = kb.vectors.cols();
  const double orth = (kb.vectors.adjoint() * kb.vectors - CMat::Identity(k, k)).cwiseAbs().maxCoeff();
  return below("Lanczos basis orthonormality", orth, 1e-10);
}

CheckOutcome check_husimi() {
  const double j = 5.0;
  const SphereGrid grid = SphereGrid::gauss_legendre();
  const CMat rho = pure_density(spin_coherent(j, 1.0, 0.3));
  return below("Husimi normalization", std::abs(husimi_norm(husimi_q(rho, grid), grid, 11) - 1.0), 1e-3);
}

CheckOutcome check_circular() {
  double worst = 0.0;
  for (EnsembleKind kind : {EnsembleKind::kCUE, EnsembleKind::kCOE}) {
    const CMat u = sample_circular({kind, 12, {}, 99});
    worst = std::max(worst, (u.adjoint() * u - CMat::Identity(12, 12)).cwiseAbs().maxCoeff());
  }
  const CMat coe = sample_circular({EnsembleKind::kCOE, 12, {}, 99});
  worst = std::max(worst, (coe - coe.transpose()).cwiseAbs().maxCoeff());
  return below("circular ensembles are unitary, COE symmetric", worst, 1e-10);
}

CheckOutcome check_reflection() {
  const KickedIsing spec{4, 1.0, 1.4, 1.4};
  const CMat u = make_propagator(spec).matrix;
  const CMat r = reflection_operator(4);
  return below("kicked Ising commutes with reflection", commutator(u, r).cwiseAbs().maxCoeff(), 1e-10);
}

CheckOutcome check_error_unitary() {
  const KickedTop kt{4.0, 7.0, 1.4};
  const PerturbedPair pair = perturbed_kicked_top(kt, 0.01);
  const CMat obs = angular_momentum_ops(kt.j).y;
  const int steps = 20;
  const OperatorTimeline a = heisenberg_timeline(obs, pair.u_true, steps);
  const OperatorTimeline b = heisenberg_timeline(obs, pair.u_model, steps);
  const double scale = 1.0 / (2.0 * std::pow(kt.j, 4));
  double worst = 0.0;
  for (int n = 0; n <= steps; ++n) {
    const double direct = operator_incompatibility(a[static_cast<std::size_t>(n)], b[static_cast<std::size_t>(n)], kt.j);
    const double via = incompatibility_error_form(obs, error_unitary(pair.u_true.matrix, pair.u_model.matrix, n), scale);
    worst = std::max(worst, std::abs(direct - via));
  }
  return below("incompatibility equals its error-unitary form", worst, 1e-10);
}

}  // namespace

std::vector<CheckOutcome> run_invariant_checks() {
  const std::vector<std::function<CheckOutcome()>> checks{
      check_gram,        check_bloch_roundtrip, check_regularize,     check_unitarity,
      check_heisenberg_isometry, check_classical_sphere, check_xxz_magnetization, check_trace_identity,
      check_rank_bound,  check_psd_idempotent,  check_lanczos,        check_husimi,
      check_circular,    check_reflection,      check_error_unitary,
  };
  std::vector<CheckOutcome> out;
  out.reserve(checks.size());
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"<error>", false, e.what()});
    }
  }
  return out;
}

}  // namespace cmt
