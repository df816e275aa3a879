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

// Spin coherent states, the Husimi Q-function on a sphere quadrature, and
// the Husimi (Wehrl) entropy of states and regularized observables.

#pragma once

#include <vector>

#include "cmtlab/linalg.hpp"

namespace cmt {

/// Product quadrature on the unit sphere: Gauss-Legendre in cos θ times the
/// trapezoid rule in φ. Weights include the sin θ Jacobian and sum to 4π.
struct SphereGrid {
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> weight;

  std::size_t size() const noexcept { return weight.size(); }
  static SphereGrid gauss_legendre(int n_theta = 64, int n_phi = 128);
};

/// Gauss-Legendre nodes and weights on [−1, 1].
void gauss_legendre_nodes(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Coherent state e^{iφj} e^{−iφJ_z} e^{−iθJ_y}|j,j⟩, evaluated through the
/// closed-form rotation matrix elements. Valid on the whole sphere.
CVec spin_coherent(double j, double theta, double phi);

/// Same state from the stereographic series (1+|μ|²)^{−j} e^{μJ₋}|j,j⟩,
/// μ = e^{iφ} tan(θ/2). Throws kPrecondition at θ = π.
CVec spin_coherent_series(double j, double theta, double phi);

/// Columns are the coherent states at the grid nodes, (2j+1) × nodes.
CMat coherent_state_table(double j, const SphereGrid& grid);

/// Q(θ,φ) = ⟨θ,φ|ρ|θ,φ⟩ at every node.
std::vector<double> husimi_q(const CMat& rho, const SphereGrid& grid);
std::vector<double> husimi_q(const CMat& rho, const CMat& table);

/// ((2j+1)/4π) Σ w_i Q_i for a state of Hilbert dimension `dim` = 2j+1.
double husimi_norm(const std::vector<double>& q, const SphereGrid& grid, int dim);

/// −((2j+1)/4π) Σ w_i Q_i ln Q_i after regularizing `op`, 0 ln 0 = 0.
double husimi_entropy(const CMat& op, const SphereGrid& grid);
double husimi_entropy(const CMat& op, const SphereGrid& grid, const CMat& table);

}  // namespace cmt
