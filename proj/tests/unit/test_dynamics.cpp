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

#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "cmtlab/dynamics.hpp"
#include "cmtlab/rmt.hpp"
#include "test_support.hpp"

namespace cmt {
namespace {

using testing::max_diff;

// Reference exponential e^{-i t H} from Eigen's Pade-based matrix exponential.
CMat pade_expm(const CMat& h, double t) { return CMat(-kI * t * h).exp(); }

// Reference Pauli on `site` of an L-chain, built left to right with site 1 first.
CMat reference_site(int L, int site, const CMat& p) {
  CMat out = CMat::Identity(1, 1);
  for (int s = 1; s <= L; ++s) out = kron(out, s == site ? p : CMat::Identity(2, 2));
  return out;
}

CMat ref_pauli(char axis) {
  CMat p = CMat::Zero(2, 2);
  if (axis == 'x') p << 0, 1, 1, 0;
  if (axis == 'y') p << 0, cplx(0, -1), cplx(0, 1), 0;
  if (axis == 'z') p << 1, 0, 0, -1;
  return p;
}

TEST(AngularMomentum, SpinHalfIsHalfPauli) {
  const AngularMomentum j = angular_momentum_ops(0.5);
  EXPECT_LT(max_diff(j.x, 0.5 * ref_pauli('x')), 1e-15);
  EXPECT_LT(max_diff(j.y, 0.5 * ref_pauli('y')), 1e-15);
  EXPECT_LT(max_diff(j.z, 0.5 * ref_pauli('z')), 1e-15);
}

TEST(AngularMomentum, CommutatorsAndCasimir) {
  for (double j : {0.5, 1.0, 1.5, 4.0, 10.0, 20.0}) {
    const AngularMomentum m = angular_momentum_ops(j);
    const auto d = m.x.rows();
    EXPECT_LT(max_diff(commutator(m.x, m.y), kI * m.z), 1e-12 * j) << j;
    EXPECT_LT(max_diff(commutator(m.y, m.z), kI * m.x), 1e-12 * j) << j;
    EXPECT_LT(max_diff(commutator(m.z, m.x), kI * m.y), 1e-12 * j) << j;
    const CMat casimir = m.x * m.x + m.y * m.y + m.z * m.z;
    EXPECT_LT(max_diff(casimir, j * (j + 1.0) * CMat::Identity(d, d)), 1e-12 * j * j) << j;
    EXPECT_NEAR(m.z(0, 0).real(), j, 1e-15);
  }
}

TEST(AngularMomentum, RejectsNonPositiveOrFractional) {
  EXPECT_THROW(angular_momentum_ops(0.0), Error);
  EXPECT_THROW(angular_momentum_ops(-1.0), Error);
  EXPECT_THROW(angular_momentum_ops(0.3), Error);
}

TEST(KickedTop, MatchesPadeReference) {
  const KickedTop spec{5.0, 2.5, 1.4};
  const AngularMomentum m = angular_momentum_ops(spec.j);
  const CMat expected = pade_expm(m.z * m.z / (2.0 * spec.j), spec.lambda) * pade_expm(m.x, spec.alpha);
  EXPECT_LT(max_diff(kicked_top_floquet(spec).matrix, expected), 1e-10);
}

TEST(KickedTop, PureRotationHasPeriodFour) {
  const KickedTop spec{3.0, 0.0, kPi / 2};
  const CMat u = kicked_top_floquet(spec).matrix;
  EXPECT_LT(max_diff(u, pade_expm(angular_momentum_ops(3.0).x, kPi / 2)), 1e-12);
  const CMat u4 = u * u * u * u;
  EXPECT_LT(max_diff(u4, CMat::Identity(u.rows(), u.cols())), 1e-10);

  const OperatorTimeline tl = heisenberg_timeline(angular_momentum_ops(3.0).y, {u, StepSemantics::kFloquet, 1.0}, 8);
  EXPECT_LT(max_diff(tl[4], tl[0]), 1e-10);
  EXPECT_LT(max_diff(tl[8], tl[0]), 1e-10);
}

TEST(KickedIsing, MatchesPadeReference) {
  const KickedIsing spec{3, 1.0, 1.4, 0.7};
  CMat zz = CMat::Zero(8, 8);
  CMat field = CMat::Zero(8, 8);
  for (int s = 1; s <= 3; ++s) {
    if (s < 3) zz += reference_site(3, s, ref_pauli('z')) * reference_site(3, s + 1, ref_pauli('z'));
    field += spec.hz * reference_site(3, s, ref_pauli('z')) + spec.hx * reference_site(3, s, ref_pauli('x'));
  }
  const CMat expected = pade_expm(spec.J * zz, 1.0) * pade_expm(field, 1.0);
  EXPECT_LT(max_diff(tki_floquet(spec).matrix, expected), 1e-10);
}

TEST(KickedIsing, NoTransverseFieldIsDiagonal) {
  const CMat u = tki_floquet({4, 1.0, 0.0, 1.4}).matrix;
  EXPECT_EQ(u.rows(), 16);
  EXPECT_TRUE(u.isDiagonal(1e-14));
  EXPECT_EQ(tki_floquet({2, 1.0, 1.4, 1.4}).matrix.rows(), 4);
}

TEST(TiltedIsing, HamiltonianAndGroupProperty) {
  const TiltedIsing spec{3, 1.0, 1.4, 0.1, 0.3};
  CMat h = CMat::Zero(8, 8);
  for (int s = 1; s <= 3; ++s) {
    if (s < 3) h += reference_site(3, s, ref_pauli('z')) * reference_site(3, s + 1, ref_pauli('z'));
    h += 0.1 * reference_site(3, s, ref_pauli('z')) + 1.4 * reference_site(3, s, ref_pauli('x'));
  }
  EXPECT_LT(max_diff(ti_hamiltonian(spec), h), 1e-14);
  const CMat u = ti_unitary(spec).matrix;
  EXPECT_LT(max_diff(u, pade_expm(h, 0.3)), 1e-10);
  TiltedIsing twice = spec;
  twice.dt = 0.6;
  EXPECT_LT(max_diff(ti_unitary(twice).matrix, u * u), 1e-10);
  TiltedIsing zero = spec;
  zero.dt = 0.0;
  EXPECT_LT(max_diff(ti_unitary(zero).matrix, CMat::Identity(8, 8)), 1e-14);
}

TEST(Xxz, HamiltonianMatchesReference) {
  const XXZ spec{4, 1.0, 1.1, 0.94, 3, 0.5, Axis::kZ};
  CMat h = CMat::Zero(16, 16);
  for (int s = 1; s < 4; ++s) {
    h += 0.25 * (reference_site(4, s, ref_pauli('x')) * reference_site(4, s + 1, ref_pauli('x')) +
                 reference_site(4, s, ref_pauli('y')) * reference_site(4, s + 1, ref_pauli('y')));
    h += 1.1 / 4.0 * reference_site(4, s, ref_pauli('z')) * reference_site(4, s + 1, ref_pauli('z'));
  }
  h += 0.47 * reference_site(4, 3, ref_pauli('z'));
  EXPECT_LT(max_diff(xxz_hamiltonian(spec), h), 1e-14);
  EXPECT_LT(max_diff(xxz_unitary(spec).matrix, pade_expm(h, 0.5)), 1e-10);
}

TEST(Xxz, ConservesTotalSzForZImpurity) {
  for (double g : {0.0, 0.16, 0.94}) {
    const XXZ spec{5, 1.0, 1.1, g, 3, 1.0, Axis::kZ};
    const CMat sz = collective_spin(5, Axis::kZ);
    EXPECT_LT(commutator(xxz_hamiltonian(spec), sz).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(commutator(xxz_unitary(spec).matrix, sz).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Xxz, YImpurityBreaksSzConservation) {
  const XXZ spec{3, 1.0, 1.1, 0.94, 2, 1.0, Axis::kY};
  EXPECT_GT(commutator(xxz_hamiltonian(spec), collective_spin(3, Axis::kZ)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Propagators, AllUnitary) {
  const std::vector<ModelSpec> specs{KickedTop{10.0, 7.0, 1.4}, KickedTop{2.5, 2.5, kPi / 2},
                                     KickedIsing{5, 1.0, 1.4, 1.4}, TiltedIsing{4, 1.0, 1.4, 0.4, 1.0},
                                     XXZ{5, 1.0, 1.1, 0.94, 3, 1.0, Axis::kY}};
  for (const auto& s : specs) {
    const UnitaryPropagator u = make_propagator(s);
    EXPECT_EQ(u.dim(), hilbert_dim(s));
    EXPECT_TRUE(is_unitary(u.matrix, 1e-10)) << model_name(s);
  }
}

TEST(ModelSpec, ValidationErrors) {
  EXPECT_THROW(validate(KickedTop{0.25, 1.0, 1.0}), Error);
  EXPECT_THROW(validate(KickedIsing{1, 1.0, 1.0, 1.0}), Error);
  EXPECT_THROW(validate(TiltedIsing{3, 1.0, 1.0, 1.0, 0.0}), Error);
  EXPECT_THROW(validate(XXZ{3, 1.0, 1.1, 0.5, 4, 1.0, Axis::kZ}), Error);
  EXPECT_THROW(validate(XXZ{3, 1.0, 1.1, 0.5, 0, 1.0, Axis::kZ}), Error);
  EXPECT_NO_THROW(validate(XXZ{3, 1.0, 1.1, 0.5, 3, 1.0, Axis::kZ}));
}

TEST(SitePauli, SiteOneIsMostSignificant) {
  const CMat z1 = site_pauli(2, 1, Axis::kZ);
  // |01> has site 1 up, site 2 down: index 1 in the computational basis.
  EXPECT_NEAR(z1(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(z1(2, 2).real(), -1.0, 1e-15);
  EXPECT_LT(max_diff(site_spin(3, 2, Axis::kY), 0.5 * reference_site(3, 2, ref_pauli('y'))), 1e-15);
  EXPECT_THROW(site_pauli(3, 4, Axis::kX), Error);
}

TEST(ClassicalMap, FixedPointAndPureRotation) {
  const SpinVector fixed = classical_kicked_top_step({1.0, 0.0, 0.0}, 3.7, 0.9);
  EXPECT_NEAR(fixed.x, 1.0, 1e-15);
  EXPECT_NEAR(fixed.y, 0.0, 1e-15);
  EXPECT_NEAR(fixed.z, 0.0, 1e-15);
  const double a = 0.7;
  const SpinVector r = classical_kicked_top_step({0.0, 0.6, 0.8}, 0.0, a);
  EXPECT_NEAR(r.y, 0.6 * std::cos(a) - 0.8 * std::sin(a), 1e-15);
  EXPECT_NEAR(r.z, 0.6 * std::sin(a) + 0.8 * std::cos(a), 1e-15);
}

TEST(ClassicalMap, StaysOnSphere) {
  SpinVector v{0.0, 0.6, 0.8};
  EXPECT_NEAR(classical_kicked_top_step(v, 2.5, kPi / 2).norm(), 1.0, 1e-12);
  for (int n = 0; n < 10000; ++n) {
    v = classical_kicked_top_step(v, 6.5, kPi / 2);
    ASSERT_NEAR(v.norm(), 1.0, 1e-12);
  }
  EXPECT_THROW(classical_kicked_top_step({1.0, 1.0, 0.0}, 1.0, 1.0), Error);
}

TEST(Timeline, MatchesMatrixPowersAndIsIsometric) {
  const KickedTop spec{4.0, 7.0, 1.4};
  const UnitaryPropagator u = make_propagator(spec);
  const CMat o = angular_momentum_ops(4.0).y;
  const OperatorTimeline tl = heisenberg_timeline(o, u, 200);
  ASSERT_EQ(tl.size(), 201u);
  EXPECT_EQ(tl[0], o);
  CMat un = CMat::Identity(9, 9);
  for (int n = 1; n <= 5; ++n) {
    un = un * u.matrix;
    EXPECT_LT(max_diff(tl[static_cast<std::size_t>(n)], un.adjoint() * o * un), 1e-10);
  }
  const double norm = (o * o).trace().real();
  for (std::size_t n = 0; n < tl.size(); ++n) {
    EXPECT_TRUE(is_hermitian(tl[n], 1e-10));
    EXPECT_LT(std::abs((tl[n] * tl[n]).trace().real() - norm), 1e-8 * norm);
  }
}

TEST(Timeline, IdentityPropagatorAndZeroSteps) {
  const CMat o = site_spin(2, 1, Axis::kY);
  const OperatorTimeline only = heisenberg_timeline(o, {CMat::Identity(4, 4), StepSemantics::kFloquet, 1.0}, 0);
  EXPECT_EQ(only.size(), 1u);
  const OperatorTimeline flat = heisenberg_timeline(o, {CMat::Identity(4, 4), StepSemantics::kFloquet, 1.0}, 5);
  for (std::size_t n = 0; n < flat.size(); ++n) EXPECT_LT(max_diff(flat[n], o), 1e-15);
  EXPECT_THROW(heisenberg_timeline(o, {CMat::Identity(2, 2), StepSemantics::kFloquet, 1.0}, 2), Error);
}

}  // namespace
}  // namespace cmt
