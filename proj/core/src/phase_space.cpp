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

#include "cmtlab/phase_space.hpp"

#include <cmath>

#include "cmtlab/operator_space.hpp"

namespace cmt {

namespace {

int spin_dim_checked(double j) {
  const double twice = 2.0 * j;
  if (!(j > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw Error(ErrorCode::kPrecondition, "spin j must be a positive half-integer");
  }
  return static_cast<int>(std::lround(twice)) + 1;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double spin_from_dim(Eigen::Index d) { return 0.5 * static_cast<double>(d - 1); }

}  // namespace

void gauss_legendre_nodes(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorCode::kPrecondition, "gauss_legendre_nodes: n must be positive");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    weights[0] = 2.0;
    return;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

SphereGrid SphereGrid::gauss_legendre(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw Error(ErrorCode::kPrecondition, "SphereGrid: resolution must be positive");
  std::vector<double> x, w;
  gauss_legendre_nodes(n_theta, x, w);
  SphereGrid g;
  const double dphi = 2.0 * kPi / n_phi;
  for (int a = 0; a < n_theta; ++a) {
    const double theta = std::acos(x[static_cast<std::size_t>(a)]);
    for (int b = 0; b < n_phi; ++b) {
      g.theta.push_back(theta);
      g.phi.push_back(b * dphi);
      g.weight.push_back(w[static_cast<std::size_t>(a)] * dphi);
    }
  }
  return g;
}

CVec spin_coherent(double j, double theta, double phi) {
  const int d = spin_dim_checked(j);
  const int n = d - 1;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  CVec out(d);
  for (int k = 0; k < d; ++k) {
    // ⟨j, j−k| e^{−iθJ_y} |j, j⟩ = √C(2j,k) cos^{2j−k}(θ/2) sin^k(θ/2);
    // e^{iφj} e^{−iφJ_z} then contributes e^{iφk}.
    const double amp = std::exp(0.5 * log_binomial(n, k)) * std::pow(c, n - k) * std::pow(s, k);
    out(k) = amp * std::exp(kI * (phi * k));
  }
  return out;
}

CVec spin_coherent_series(double j, double theta, double phi) {
  const int d = spin_dim_checked(j);
  const double half = 0.5 * theta;
  if (std::abs(std::cos(half)) < 1e-15) throw Error(ErrorCode::kPrecondition, "series form is singular at theta = pi");
  const cplx mu = std::exp(kI * phi) * std::tan(half);
  const double norm = std::pow(1.0 + std::norm(mu), -j);
  CVec out(d);
  cplx power = 1.0;
  for (int k = 0; k < d; ++k) {
    out(k) = norm * std::exp(0.5 * log_binomial(d - 1, k)) * power;
    power *= mu;
  }
  return out;
}

CMat coherent_state_table(double j, const SphereGrid& grid) {
  const int d = spin_dim_checked(j);
  CMat table(d, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.col(static_cast<Eigen::Index>(i)) = spin_coherent(j, grid.theta[i], grid.phi[i]);
  }
  return table;
}

std::vector<double> husimi_q(const CMat& rho, const CMat& table) {
  require_same_dim(rho.rows(), table.rows(), "husimi_q: state vs coherent table");
  const CMat applied = rho * table;
  std::vector<double> q(static_cast<std::size_t>(table.cols()));
  for (Eigen::Index i = 0; i < table.cols(); ++i) {
    q[static_cast<std::size_t>(i)] = table.col(i).dot(applied.col(i)).real();
  }
  return q;
}

std::vector<double> husimi_q(const CMat& rho, const SphereGrid& grid) {
  return husimi_q(rho, coherent_state_table(spin_from_dim(rho.rows()), grid));
}

double husimi_norm(const std::vector<double>& q, const SphereGrid& grid, int dim) {
  if (q.size() != grid.size()) throw Error(ErrorCode::kDimensionMismatch, "husimi_norm: grid size");
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += grid.weight[i] * q[i];
  return dim / (4.0 * kPi) * acc;
}

double husimi_entropy(const CMat& op, const SphereGrid& grid, const CMat& table) {
  const CMat rho = regularize_operator(op);
  const std::vector<double> q = husimi_q(rho, table);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) acc -= grid.weight[i] * q[i] * std::log(q[i]);
  }
  return static_cast<double>(rho.rows()) / (4.0 * kPi) * acc;
}

double husimi_entropy(const CMat& op, const SphereGrid& grid) {
  return husimi_entropy(op, grid, coherent_state_table(spin_from_dim(op.rows()), grid));
}

}  // namespace cmt
