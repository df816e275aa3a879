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

#include "cmtlab/dynamics.hpp"

#include <cmath>
#include <utility>

#include "cmtlab/rmt.hpp"

namespace cmt {

namespace {

constexpr int kMaxChainLength = 10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int spin_dim(double j) { return static_cast<int>(std::lround(2.0 * j)) + 1; }

void check_spin(double j) {
  const double twice = 2.0 * j;
  if (!(j > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw Error(ErrorCode::kPrecondition, "spin j must be a positive half-integer, got " + std::to_string(j));
  }
}

void check_chain(int L) {
  if (L < 2 || L > kMaxChainLength) {
    throw Error(ErrorCode::kPrecondition,
                "chain length L must lie in [2, " + std::to_string(kMaxChainLength) + "], got " + std::to_string(L));
  }
}

// Sum of identical single-site terms and nearest-neighbour bonds, free boundary.
CMat zz_bonds(int L) {
  const Eigen::Index d = Eigen::Index{1} << L;
  CMat h = CMat::Zero(d, d);
  for (int s = 1; s < L; ++s) h += site_pauli(L, s, Axis::kZ) * site_pauli(L, s + 1, Axis::kZ);
  return h;
}

}  // namespace

void validate(const ModelSpec& spec) {
  std::visit(overloaded{
                 [](const KickedTop& m) { check_spin(m.j); },
                 [](const KickedIsing& m) { check_chain(m.L); },
                 [](const TiltedIsing& m) {
                   check_chain(m.L);
                   if (!(m.dt > 0.0)) throw Error(ErrorCode::kPrecondition, "dt must be positive");
                 },
                 [](const XXZ& m) {
                   check_chain(m.L);
                   if (m.site < 1 || m.site > m.L) {
                     throw Error(ErrorCode::kPrecondition, "impurity site must lie in [1, L]");
                   }
                   if (!(m.dt > 0.0)) throw Error(ErrorCode::kPrecondition, "dt must be positive");
                 },
             },
             spec);
}

int hilbert_dim(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const KickedTop& m) { return spin_dim(m.j); },
                        [](const KickedIsing& m) { return 1 << m.L; },
                        [](const TiltedIsing& m) { return 1 << m.L; },
                        [](const XXZ& m) { return 1 << m.L; },
                    },
                    spec);
}

std::string model_name(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const KickedTop&) { return std::string("kicked-top"); },
                        [](const KickedIsing&) { return std::string("kicked-ising"); },
                        [](const TiltedIsing&) { return std::string("tilted-ising"); },
                        [](const XXZ&) { return std::string("xxz"); },
                    },
                    spec);
}

AngularMomentum angular_momentum_ops(double j) {
  if (!(j > 0.0)) throw Error(ErrorCode::kPrecondition, "angular_momentum_ops: j must be positive");
  check_spin(j);
  const int d = spin_dim(j);
  CMat jp = CMat::Zero(d, d);
  // Row/column k holds m = j − k; J+ raises m, i.e. moves one index up.
  for (int k = 1; k < d; ++k) {
    const double m = j - k;
    jp(k - 1, k) = std::sqrt((j - m) * (j + m + 1.0));
  }
  AngularMomentum out;
  out.x = 0.5 * (jp + jp.adjoint());
  out.y = (jp - jp.adjoint()) / (2.0 * kI);
  out.z = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) out.z(k, k) = j - k;
  return out;
}

UnitaryPropagator kicked_top_floquet(const KickedTop& spec) {
  check_spin(spec.j);
  const AngularMomentum jm = angular_momentum_ops(spec.j);
  const int d = spin_dim(spec.j);
  CVec twist(d);
  for (int k = 0; k < d; ++k) {
    const double m = spec.j - k;
    twist(k) = std::exp(-kI * (spec.lambda * m * m / (2.0 * spec.j)));
  }
  const CMat rotation = expm_hermitian(jm.x, spec.alpha);
  return {twist.asDiagonal() * rotation, StepSemantics::kFloquet, 1.0};
}

UnitaryPropagator tki_floquet(const KickedIsing& spec) {
  check_chain(spec.L);
  const CMat zz = zz_bonds(spec.L);
  const Eigen::Index d = zz.rows();
  CVec ising(d);
  for (Eigen::Index k = 0; k < d; ++k) ising(k) = std::exp(-kI * (spec.J * zz(k, k).real()));
  const CMat one_site = spec.hz * pauli(Axis::kZ) + spec.hx * pauli(Axis::kX);
  const CMat kick1 = expm_hermitian(one_site, 1.0);
  CMat kick = kick1;
  for (int s = 1; s < spec.L; ++s) kick = kron(kick, kick1);
  return {ising.asDiagonal() * kick, StepSemantics::kFloquet, 1.0};
}

CMat ti_hamiltonian(const TiltedIsing& spec) {
  check_chain(spec.L);
  CMat h = spec.J * zz_bonds(spec.L);
  for (int s = 1; s <= spec.L; ++s) {
    h += spec.hz * site_pauli(spec.L, s, Axis::kZ) + spec.hx * site_pauli(spec.L, s, Axis::kX);
  }
  return h;
}

UnitaryPropagator ti_unitary(const TiltedIsing& spec) {
  const CMat h = ti_hamiltonian(spec);
  if (!is_hermitian(h, 1e-12)) throw Error(ErrorCode::kConsistency, "tilted Ising Hamiltonian is not Hermitian");
  return {expm_hermitian(h, spec.dt), StepSemantics::kContinuousTime, spec.dt};
}

CMat xxz_hamiltonian(const XXZ& spec) {
  check_chain(spec.L);
  if (spec.site < 1 || spec.site > spec.L) throw Error(ErrorCode::kPrecondition, "impurity site must lie in [1, L]");
  const Eigen::Index d = Eigen::Index{1} << spec.L;
  CMat h = CMat::Zero(d, d);
  for (int s = 1; s < spec.L; ++s) {
    h += (spec.Jxy / 4.0) * (site_pauli(spec.L, s, Axis::kX) * site_pauli(spec.L, s + 1, Axis::kX) +
                             site_pauli(spec.L, s, Axis::kY) * site_pauli(spec.L, s + 1, Axis::kY));
    h += (spec.Jzz / 4.0) * site_pauli(spec.L, s, Axis::kZ) * site_pauli(spec.L, s + 1, Axis::kZ);
  }
  h += (spec.g / 2.0) * site_pauli(spec.L, spec.site, spec.impurity_axis);
  return h;
}

UnitaryPropagator xxz_unitary(const XXZ& spec) {
  const CMat h = xxz_hamiltonian(spec);
  if (!is_hermitian(h, 1e-12)) throw Error(ErrorCode::kConsistency, "XXZ Hamiltonian is not Hermitian");
  return {expm_hermitian(h, spec.dt), StepSemantics::kContinuousTime, spec.dt};
}

UnitaryPropagator make_propagator(const ModelSpec& spec) {
  validate(spec);
  return std::visit(overloaded{
                        [](const KickedTop& m) { return kicked_top_floquet(m); },
                        [](const KickedIsing& m) { return tki_floquet(m); },
                        [](const TiltedIsing& m) { return ti_unitary(m); },
                        [](const XXZ& m) { return xxz_unitary(m); },
                    },
                    spec);
}

CMat pauli(Axis axis) {
  CMat p = CMat::Zero(2, 2);
  switch (axis) {
    case Axis::kX: p(0, 1) = 1.0; p(1, 0) = 1.0; break;
    case Axis::kY: p(0, 1) = -kI; p(1, 0) = kI; break;
    case Axis::kZ: p(0, 0) = 1.0; p(1, 1) = -1.0; break;
  }
  return p;
}

CMat site_pauli(int L, int site, Axis axis) {
  if (site < 1 || site > L) throw Error(ErrorCode::kPrecondition, "site index out of range");
  CMat out = CMat::Identity(1, 1);
  const CMat id2 = CMat::Identity(2, 2);
  for (int s = 1; s <= L; ++s) out = kron(out, s == site ? pauli(axis) : id2);
  return out;
}

CMat site_spin(int L, int site, Axis axis) { return 0.5 * site_pauli(L, site, axis); }

CMat collective_spin(int L, Axis axis) {
  const Eigen::Index d = Eigen::Index{1} << L;
  CMat s = CMat::Zero(d, d);
  for (int k = 1; k <= L; ++k) s += site_spin(L, k, axis);
  return s;
}

double SpinVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

SpinVector classical_kicked_top_step(const SpinVector& v, double lambda, double alpha) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kPrecondition, "classical_kicked_top_step: input is not a unit vector");
  }
  const double xt = v.x;
  const double yt = v.y * std::cos(alpha) - v.z * std::sin(alpha);
  const double zt = v.y * std::sin(alpha) + v.z * std::cos(alpha);
  const double c = std::cos(lambda * zt);
  const double s = std::sin(lambda * zt);
  SpinVector out{xt * c - yt * s, xt * s + yt * c, zt};
  // Re-project onto the sphere; the map is norm preserving, this only
  // removes rounding drift over long orbits.
  const double n = out.norm();
  out.x /= n;
  out.y /= n;
  out.z /= n;
  return out;
}

OperatorTimeline::OperatorTimeline(std::vector<CMat> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error(ErrorCode::kPrecondition, "timeline needs at least the initial observable");
}

OperatorTimeline heisenberg_timeline(const CMat& observable, const UnitaryPropagator& u, int steps) {
  require_same_dim(observable.rows(), u.dim(), "heisenberg_timeline: observable vs propagator");
  require_same_dim(observable.cols(), u.dim(), "heisenberg_timeline: observable cols");
  if (steps < 0) throw Error(ErrorCode::kPrecondition, "heisenberg_timeline: negative step count");
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(observable);
  const CMat ud = u.matrix.adjoint();
  for (int n = 0; n < steps; ++n) {
    CMat next = ud * out.back() * u.matrix;
    // Restore exact hermiticity lost to rounding.
    next = 0.5 * (next + next.adjoint()).eval();
    out.push_back(std::move(next));
  }
  return OperatorTimeline(std::move(out));
}

OperatorTimeline random_unitary_timeline(const CMat& observable, int steps, std::uint64_t seed) {
  if (steps < 0) throw Error(ErrorCode::kPrecondition, "random_unitary_timeline: negative step count");
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(observable);
  const int d = static_cast<int>(observable.rows());
  for (int n = 1; n <= steps; ++n) {
    const CMat v = sample_circular({EnsembleKind::kCUE, d, {}, derive_seed(seed, static_cast<std::uint64_t>(n))});
    out.push_back(v.adjoint() * observable * v);
  }
  return OperatorTimeline(std::move(out));
}

}  // namespace cmt
