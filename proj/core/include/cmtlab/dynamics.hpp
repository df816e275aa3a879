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

// Propagators for the kicked top, the tilted-field kicked Ising chain, the
// time-independent tilted-field Ising chain and the XXZ chain with a single
// impurity, plus Heisenberg operator timelines and the classical top map.
//
// Spin chains use free boundaries and the site ordering of kron products:
// site 1 is the most significant tensor factor.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cmtlab/linalg.hpp"

namespace cmt {

enum class Axis { kX, kY, kZ };

struct KickedTop {
  double j = 10.0;       // half-integer spin
  double lambda = 0.0;   // kicking strength
  double alpha = kPi / 2;  // precession angle about x
};

struct KickedIsing {
  int L = 2;
  double J = 1.0;
  double hx = 1.4;
  double hz = 1.4;
};

struct TiltedIsing {
  int L = 2;
  double J = 1.0;
  double hx = 1.4;
  double hz = 1.4;
  double dt = 1.0;
};

struct XXZ {
  int L = 2;
  double Jxy = 1.0;
  double Jzz = 1.1;
  double g = 0.0;
  int site = 1;  // 1-based impurity site
  double dt = 1.0;
  Axis impurity_axis = Axis::kZ;
};

using ModelSpec = std::variant<KickedTop, KickedIsing, TiltedIsing, XXZ>;

/// Throws kPrecondition when the spec violates its invariants.
void validate(const ModelSpec& spec);
int hilbert_dim(const ModelSpec& spec);
std::string model_name(const ModelSpec& spec);

enum class StepSemantics { kFloquet, kContinuousTime };

struct UnitaryPropagator {
  CMat matrix;
  StepSemantics semantics = StepSemantics::kFloquet;
  double dt = 1.0;

  Eigen::Index dim() const { return matrix.rows(); }
};

struct AngularMomentum {
  CMat x, y, z;
};

/// Spin-j matrices in the basis |j⟩, |j−1⟩, …, |−j⟩ (J_z descending).
AngularMomentum angular_momentum_ops(double j);

/// exp(−iλ J_z²/(2j)) exp(−iα J_x), τ = 1.
UnitaryPropagator kicked_top_floquet(const KickedTop& spec);
UnitaryPropagator tki_floquet(const KickedIsing& spec);
UnitaryPropagator ti_unitary(const TiltedIsing& spec);
UnitaryPropagator xxz_unitary(const XXZ& spec);
UnitaryPropagator make_propagator(const ModelSpec& spec);

CMat ti_hamiltonian(const TiltedIsing& spec);
CMat xxz_hamiltonian(const XXZ& spec);

// Spin-chain building blocks. `site` is 1-based.
CMat pauli(Axis axis);
CMat site_pauli(int L, int site, Axis axis);
/// s_site^axis = σ/2 on one site.
CMat site_spin(int L, int site, Axis axis);
/// S^axis = ½ Σ_j σ_j^axis.
CMat collective_spin(int L, Axis axis);

struct SpinVector {
  double x = 0.0, y = 0.0, z = 1.0;
  double norm() const;
};

/// One iterate of the classical kicked-top map: rotation about x by α,
/// then a twist about z by λZ̃. Input must lie on the unit sphere to 1e-9.
SpinVector classical_kicked_top_step(const SpinVector& v, double lambda, double alpha);

/// O_0 = O, O_n = U† O_{n−1} U.
class OperatorTimeline {
 public:
  OperatorTimeline() = default;
  explicit OperatorTimeline(std::vector<CMat> steps);

  const CMat& initial() const { return steps_.front(); }
  const std::vector<CMat>& steps() const noexcept { return steps_; }
  const CMat& operator[](std::size_t n) const { return steps_[n]; }
  std::size_t size() const noexcept { return steps_.size(); }
  int dim() const { return steps_.empty() ? 0 : static_cast<int>(steps_.front().rows()); }

 private:
  std::vector<CMat> steps_;
};

/// N conjugation steps, returning N+1 operators [O_0, …, O_N].
OperatorTimeline heisenberg_timeline(const CMat& observable, const UnitaryPropagator& u, int steps);

/// Timeline whose n-th entry is V_n† O V_n for independent Haar V_n (V_0 = I).
/// Informationally complete for N ≥ d²−1 with probability one.
OperatorTimeline random_unitary_timeline(const CMat& observable, int steps, std::uint64_t seed);

}  // namespace cmt
