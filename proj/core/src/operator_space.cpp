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

#include "cmtlab/operator_space.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cmt {

namespace {

// 0-based position of the off-diagonal pair (a, b), a > b, among the
// symmetric elements; the antisymmetric partner sits d(d−1)/2 further on.
inline std::size_t pair_index(int d, int a, int b) {
  return static_cast<std::size_t>(d - 1) + static_cast<std::size_t>(a) * (a - 1) / 2 +
         static_cast<std::size_t>(b);
}

}  // namespace

HermitianBasis::HermitianBasis(int d, std::vector<CMat> elements, bool gell_mann)
    : dim_(d), elements_(std::move(elements)), gell_mann_(gell_mann) {
  if (!gell_mann_) {
    const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
    dual_.resize(static_cast<Eigen::Index>(elements_.size()), dd);
    for (std::size_t alpha = 0; alpha < elements_.size(); ++alpha) {
      const CMat& e = elements_[alpha];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) dual_(static_cast<Eigen::Index>(alpha), i * d + j) = e(j, i);
    }
  }
}

HermitianBasis HermitianBasis::gell_mann(int d) {
  if (d < 2) throw Error(ErrorCode::kInvalidDimension, "gell_mann_basis needs d >= 2, got " + std::to_string(d));
  const std::size_t count = static_cast<std::size_t>(d) * d - 1;
  std::vector<CMat> out(count, CMat::Zero(d, d));
  for (int k = 1; k < d; ++k) {
    CMat& e = out[static_cast<std::size_t>(k - 1)];
    const double norm = std::sqrt(static_cast<double>(k + k * k));
    for (int i = 0; i < k; ++i) e(i, i) = 1.0 / norm;
    e(k, k) = -static_cast<double>(k) / norm;
  }
  const std::size_t half = static_cast<std::size_t>(d) * (d - 1) / 2;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int a = 1; a < d; ++a) {
    for (int b = 0; b < a; ++b) {
      const std::size_t n = pair_index(d, a, b);
      out[n](a, b) = r2;
      out[n](b, a) = r2;
      out[n + half](a, b) = cplx(0.0, r2);
      out[n + half](b, a) = cplx(0.0, -r2);
    }
  }
  return HermitianBasis(d, std::move(out), true);
}

HermitianBasis HermitianBasis::from_elements(int d, std::vector<CMat> elements, double tol) {
  if (d < 2) throw Error(ErrorCode::kInvalidDimension, "basis dimension must be >= 2");
  const std::size_t count = static_cast<std::size_t>(d) * d - 1;
  if (elements.size() != count) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(count) + " basis elements, got " + std::to_string(elements.size()));
  }
  for (std::size_t a = 0; a < count; ++a) {
    const CMat& e = elements[a];
    require_same_dim(e.rows(), d, "basis element rows");
    require_same_dim(e.cols(), d, "basis element cols");
    if (!is_hermitian(e, tol)) throw Error(ErrorCode::kPrecondition, "basis element not Hermitian");
    if (std::abs(e.trace()) > tol) throw Error(ErrorCode::kPrecondition, "basis element not traceless");
  }
  HermitianBasis basis(d, std::move(elements), false);
  const CMat g = basis.gram();
  if (max_abs(g - CMat::Identity(g.rows(), g.cols())) > tol) {
    throw Error(ErrorCode::kPrecondition, "basis elements are not orthonormal");
  }
  return basis;
}

RVec HermitianBasis::coefficients(const CMat& op) const {
  require_same_dim(op.rows(), dim_, "coefficients: operator rows");
  require_same_dim(op.cols(), dim_, "coefficients: operator cols");
  const int d = dim_;
  RVec c(static_cast<Eigen::Index>(elements_.size()));
  if (!gell_mann_) {
    CVec v(static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v(i * d + j) = op(i, j);
    c = (dual_ * v).real();
    return c;
  }
  double running = 0.0;
  for (int k = 1; k < d; ++k) {
    running += op(k - 1, k - 1).real();
    c(k - 1) = (running - k * op(k, k).real()) / std::sqrt(static_cast<double>(k + k * k));
  }
  const std::size_t half = static_cast<std::size_t>(d) * (d - 1) / 2;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int a = 1; a < d; ++a) {
    for (int b = 0; b < a; ++b) {
      const std::size_t n = pair_index(d, a, b);
      const cplx oab = op(a, b);
      const cplx oba = op(b, a);
      c(static_cast<Eigen::Index>(n)) = r2 * (oab + oba).real();
      // Tr(O E) with E(a,b) = i/√2, E(b,a) = −i/√2.
      c(static_cast<Eigen::Index>(n + half)) = (kI * r2 * (oba - oab)).real();
    }
  }
  return c;
}

CMat HermitianBasis::combine(const RVec& c) const {
  require_same_dim(c.size(), static_cast<Eigen::Index>(elements_.size()), "combine: coefficient length");
  const int d = dim_;
  CMat out = CMat::Zero(d, d);
  if (!gell_mann_) {
    for (std::size_t a = 0; a < elements_.size(); ++a) out += c(static_cast<Eigen::Index>(a)) * elements_[a];
    return out;
  }
  // Diagonal: entry i collects +c_k/√(k+k²) for k > i and −i·c_i/√(i+i²).
  double tail = 0.0;
  for (int k = d - 1; k >= 1; --k) {
    const double w = c(k - 1) / std::sqrt(static_cast<double>(k + k * k));
    out(k, k) = tail - k * w;
    tail += w;
  }
  out(0, 0) = tail;
  const std::size_t half = static_cast<std::size_t>(d) * (d - 1) / 2;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int a = 1; a < d; ++a) {
    for (int b = 0; b < a; ++b) {
      const std::size_t n = pair_index(d, a, b);
      const double s = c(static_cast<Eigen::Index>(n)) * r2;
      const double t = c(static_cast<Eigen::Index>(n + half)) * r2;
      out(a, b) = cplx(s, t);
      out(b, a) = cplx(s, -t);
    }
  }
  return out;
}

CMat HermitianBasis::gram() const {
  const auto n = static_cast<Eigen::Index>(elements_.size());
  CMat g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b) {
      const cplx v = (elements_[a].array() * elements_[b].transpose().array()).sum();
      g(a, b) = v;
      g(b, a) = std::conj(v);
    }
  return g;
}

HermitianBasis gell_mann_basis(int d) { return HermitianBasis::gell_mann(d); }

BlochVector bloch_encode(const CMat& rho, const HermitianBasis& basis) {
  require_same_dim(rho.rows(), basis.dim(), "bloch_encode: state rows");
  require_same_dim(rho.cols(), basis.dim(), "bloch_encode: state cols");
  const double scale = std::max(1.0, max_abs(rho));
  if (!is_hermitian(rho, 1e-9 * scale)) throw Error(ErrorCode::kPrecondition, "bloch_encode: state is not Hermitian");
  return {basis.coefficients(rho)};
}

CMat bloch_decode(const BlochVector& r, const HermitianBasis& basis) {
  require_same_dim(r.size(), static_cast<Eigen::Index>(basis.size()), "bloch_decode: vector length");
  const int d = basis.dim();
  CMat out = basis.combine(r.components);
  out.diagonal().array() += 1.0 / d;
  return out;
}

cplx hs_inner(const CMat& a, const CMat& b) {
  require_same_dim(a.rows(), b.rows(), "hs_inner rows");
  require_same_dim(a.cols(), b.cols(), "hs_inner cols");
  return (a.conjugate().array() * b.array()).sum();
}

OperatorVec vectorize(const CMat& op) {
  const Eigen::Index r = op.rows(), c = op.cols();
  CVec v(r * c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) v(i * c + j) = op(i, j);
  return {std::move(v)};
}

CMat devectorize(const OperatorVec& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.entries.size()))));
  if (d * d != v.entries.size()) throw Error(ErrorCode::kDimensionMismatch, "devectorize: length is not a square");
  CMat op(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) op(i, j) = v.entries(i * d + j);
  return op;
}

CMat regularize_operator(const CMat& op) {
  if (op.rows() != op.cols()) throw Error(ErrorCode::kDimensionMismatch, "regularize_operator: not square");
  if (max_abs(op) == 0.0) throw Error(ErrorCode::kZeroOperator, "regularize_operator: zero operator");
  const CMat herm = 0.5 * (op + op.adjoint());
  const auto [vals, vecs] = eigh(herm);
  const RVec mod = vals.cwiseAbs();
  const double total = mod.sum();
  if (total == 0.0) throw Error(ErrorCode::kZeroOperator, "regularize_operator: Tr|D| = 0");
  const RVec w = mod / total;
  return vecs * w.cast<cplx>().asDiagonal() * vecs.adjoint();
}

}  // namespace cmt
