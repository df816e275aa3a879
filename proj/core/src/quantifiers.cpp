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

#include "cmtlab/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cmt {

double shannon_entropy(const CovarianceData& cov) {
  if (cov.rank() == 0) throw Error(ErrorCode::kZeroOperator, "shannon_entropy: C^-1 is zero");
  const RVec lam = cov.support_eigenvalues();
  const double total = lam.sum();
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double p = lam(i) / total;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double default_fisher_reg(const CovarianceData& cov) {
  const double top = cov.singular_values().size() > 0 ? cov.singular_values()(0) : 0.0;
  return 1e-6 * (top > 0.0 ? top * top : 1.0);
}

double fisher_information(const CovarianceData& cov, double reg) {
  if (!(reg > 0.0)) throw Error(ErrorCode::kPrecondition, "fisher_information: reg must be positive");
  const RVec& s = cov.singular_values();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) trace += 1.0 / (s(i) * s(i) + reg);
  trace += static_cast<double>(cov.params() - s.size()) / reg;
  return 1.0 / trace;
}

double fisher_information(const CovarianceData& cov) { return fisher_information(cov, default_fisher_reg(cov)); }

int covariance_rank(const CovarianceData& cov) { return cov.rank(); }

double mutual_information(const CovarianceData& cov) {
  const RVec lam = cov.support_eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) s += std::log(lam(i));
  return 0.5 * s;
}

OrderedBloch ordered_bloch_values(const CMat& rho0, const HermitianBasis& basis, SortOrder direction) {
  const RVec r = bloch_encode(rho0, basis).components;
  OrderedBloch out;
  out.order.resize(static_cast<std::size_t>(r.size()));
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    const double ma = std::abs(r(a)), mb = std::abs(r(b));
    return direction == SortOrder::kDescending ? ma > mb : ma < mb;
  });
  const double floor = 1.0 / basis.dim();
  double acc = 0.0;
  for (int idx : out.order) {
    acc += r(idx) * r(idx);
    out.partial_sums.push_back(acc);
    out.fidelity_bound.push_back(floor + acc);
  }
  return out;
}

std::vector<double> state_operator_alignment(const OperatorTimeline& timeline, const HermitianBasis& basis,
                                             const BlochVector& r) {
  require_same_dim(timeline.dim(), basis.dim(), "state_operator_alignment: timeline vs basis");
  require_same_dim(r.size(), static_cast<Eigen::Index>(basis.size()), "state_operator_alignment: Bloch length");
  std::vector<double> out;
  out.reserve(timeline.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < timeline.size(); ++n) {
    acc += basis.coefficients(timeline[n]).cwiseProduct(r.components).squaredNorm();
    out.push_back(acc);
  }
  return out;
}

QuantifierSeries quantifier_series(const OperatorTimeline& timeline, const HermitianBasis& basis,
                                   const std::vector<int>& times, double rank_tol) {
  QuantifierSeries out;
  if (times.empty()) return out;
  const RMat full = CovarianceData::build(timeline, basis, rank_tol).design();
  const int longest = *std::max_element(times.begin(), times.end());
  if (longest > full.rows()) throw Error(ErrorCode::kPrecondition, "quantifier_series: time beyond timeline");
  const double reg = default_fisher_reg(CovarianceData::from_design(full.topRows(longest), rank_tol));
  for (int n : times) {
    if (n < 1) throw Error(ErrorCode::kPrecondition, "quantifier_series: times must be >= 1");
    const CovarianceData cov = CovarianceData::from_design(full.topRows(n), rank_tol);
    out.times.push_back(n);
    out.shannon.push_back(cov.rank() > 0 ? shannon_entropy(cov) : 0.0);
    out.fisher.push_back(fisher_information(cov, reg));
    out.rank.push_back(cov.rank());
    out.mutual_info.push_back(mutual_information(cov));
  }
  return out;
}

}  // namespace cmt
