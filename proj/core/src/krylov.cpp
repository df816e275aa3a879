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

#include "cmtlab/krylov.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/QR>

#include "cmtlab/operator_space.hpp"

namespace cmt {

namespace {

constexpr int kMaxOrbitDim = 32;

CVec to_vec(const CMat& op) { return vectorize(op).entries; }
CMat to_op(const CVec& v) { return devectorize({v}); }

// Two classical Gram-Schmidt passes of v against the first k columns of q.
void orthogonalize(const CMat& q, Eigen::Index k, CVec& v) {
  if (k == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const CVec c = q.leftCols(k).adjoint() * v;
    v -= q.leftCols(k) * c;
  }
}

}  // namespace

Superoperator::Superoperator(Kind kind, CMat gen, bool dense) : kind_(kind), gen_(std::move(gen)) {
  if (dense) dense_ = matrix();
}

Superoperator Superoperator::liouvillian(const CMat& h, bool force_dense) {
  if (!is_hermitian(h, 1e-12 * std::max(1.0, max_abs(h)))) {
    throw Error(ErrorCode::kPrecondition, "liouvillian: H is not Hermitian");
  }
  return Superoperator(Kind::kLiouvillian, h, force_dense || h.rows() <= kDenseLimit);
}

Superoperator Superoperator::unitary_conjugation(const CMat& u, bool force_dense) {
  if (!is_unitary(u, 1e-10)) throw Error(ErrorCode::kPrecondition, "unitary_conjugation: U is not unitary");
  return Superoperator(Kind::kUnitaryConjugation, u, force_dense || u.rows() <= kDenseLimit);
}

CVec Superoperator::apply(const CVec& v) const {
  require_same_dim(v.size(), dim(), "Superoperator::apply");
  if (is_dense()) return dense_ * v;
  const CMat x = to_op(v);
  if (kind_ == Kind::kLiouvillian) return to_vec(gen_ * x - x * gen_);
  return to_vec(gen_.adjoint() * x * gen_);
}

CMat Superoperator::matrix() const {
  if (is_dense()) return dense_;
  return kind_ == Kind::kLiouvillian ? liouvillian_matrix(gen_) : unitary_superoperator_matrix(gen_);
}

CMat liouvillian_matrix(const CMat& h) {
  const CMat id = CMat::Identity(h.rows(), h.cols());
  return kron(h, id) - kron(id, h.transpose());
}

CMat unitary_superoperator_matrix(const CMat& u) { return kron(u.adjoint(), u.transpose()); }

KrylovBasis lanczos_full_orth(const Superoperator& liouvillian, const CMat& observable, double term_tol) {
  if (liouvillian.kind() != Superoperator::Kind::kLiouvillian) {
    throw Error(ErrorCode::kPrecondition, "lanczos_full_orth needs a Liouvillian");
  }
  require_same_dim(observable.rows(), liouvillian.op_dim(), "lanczos_full_orth: observable");
  const CVec o = to_vec(observable);
  const double norm = o.norm();
  if (norm == 0.0) throw Error(ErrorCode::kZeroOperator, "lanczos_full_orth: zero observable");
  const Eigen::Index n = liouvillian.dim();
  CMat q(n, std::min<Eigen::Index>(n, 64));
  q.col(0) = o / norm;
  std::vector<double> b;
  Eigen::Index k = 1;
  while (k < n) {
    CVec a = liouvillian.apply(q.col(k - 1));
    orthogonalize(q, k, a);
    const double bk = a.norm();
    if (bk <= term_tol) break;
    if (k == q.cols()) q.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(n, 2 * q.cols()));
    q.col(k) = a / bk;
    b.push_back(bk);
    ++k;
  }
  KrylovBasis out;
  out.vectors = q.leftCols(k);
  out.b = std::move(b);
  return out;
}

CMat heisenberg_evolve(const CMat& h, const CMat& observable, double t) {
  const CMat u = expm_hermitian(h, t);
  return u.adjoint() * observable * u;
}

KrylovAmplitudes krylov_amplitudes(const CMat& evolved, const KrylovBasis& basis) {
  const CVec v = to_vec(evolved);
  require_same_dim(v.size(), basis.vectors.rows(), "krylov_amplitudes: operator vs basis");
  const double norm = v.norm();
  if (norm == 0.0) throw Error(ErrorCode::kZeroOperator, "krylov_amplitudes: zero operator");
  const CVec c = basis.vectors.adjoint() * v / norm;
  static const cplx kPhase[4] = {1.0, cplx(0.0, -1.0), -1.0, cplx(0.0, 1.0)};
  KrylovAmplitudes amp;
  amp.phi.reserve(static_cast<std::size_t>(c.size()));
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const cplx p = kPhase[k % 4] * c(k);
    if (std::abs(p.imag()) > 1e-6) {
      throw Error(ErrorCode::kConsistency,
                  "krylov_amplitudes: imaginary residue " + std::to_string(p.imag()) + " at k=" + std::to_string(k));
    }
    amp.phi.push_back(p.real());
  }
  const double captured = c.squaredNorm();
  if (std::abs(captured - 1.0) > 1e-6) {
    throw Error(ErrorCode::kConsistency,
                "krylov_amplitudes: operator leaves the Krylov space, captured weight " + std::to_string(captured));
  }
  return amp;
}

double krylov_complexity(const KrylovAmplitudes& amp) {
  double c = 0.0;
  for (std::size_t k = 0; k < amp.phi.size(); ++k) c += static_cast<double>(k) * amp.phi[k] * amp.phi[k];
  return c;
}

double krylov_entropy(const KrylovAmplitudes& amp) {
  double s = 0.0;
  for (double p : amp.phi) {
    const double w = p * p;
    if (w > 0.0) s -= w * std::log(w);
  }
  return s;
}

int arnoldi_unitary_dim(const CMat& u, const CMat& observable, double term_tol) {
  const Superoperator sup = Superoperator::unitary_conjugation(u);
  require_same_dim(observable.rows(), sup.op_dim(), "arnoldi_unitary_dim: observable");
  if (sup.op_dim() > kMaxOrbitDim) {
    throw Error(ErrorCode::kPrecondition, "arnoldi_unitary_dim: d = " + std::to_string(sup.op_dim()) +
                                              " exceeds " + std::to_string(kMaxOrbitDim));
  }
  const CVec o = to_vec(observable);
  const double norm = o.norm();
  if (norm == 0.0) throw Error(ErrorCode::kZeroOperator, "arnoldi_unitary_dim: zero observable");
  // Orbit vectors |O_n⟩ = (U† ⊗ Uᵀ)ⁿ|O⟩ keep unit norm, so no step divides
  // by a small residual. Twice the dimension in columns lifts the smallest
  // genuine directions well clear of rounding.
  const Eigen::Index n = sup.dim();
  CMat orbit(n, 2 * n);
  orbit.col(0) = o / norm;
  for (Eigen::Index k = 1; k < orbit.cols(); ++k) orbit.col(k) = sup.apply(orbit.col(k - 1));
  Eigen::ColPivHouseholderQR<CMat> qr(orbit);
  qr.setThreshold(term_tol);
  return static_cast<int>(qr.rank());
}

}  // namespace cmt
