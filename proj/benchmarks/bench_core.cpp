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

#include <benchmark/benchmark.h>

#include <random>

#include "cmtlab/dynamics.hpp"
#include "cmtlab/krylov.hpp"
#include "cmtlab/phase_space.hpp"
#include "cmtlab/tomography.hpp"

namespace {

using namespace cmt;

OperatorTimeline top_timeline(double j, int steps) {
  return heisenberg_timeline(angular_momentum_ops(j).y, kicked_top_floquet({j, 3.0, kPi / 2}), steps - 1);
}

void BM_CovarianceBuild(benchmark::State& state) {
  const double j = static_cast<double>(state.range(0));
  const OperatorTimeline tl = top_timeline(j, 100);
  const HermitianBasis basis = gell_mann_basis(static_cast<int>(2 * j) + 1);
  for (auto _ : state) benchmark::DoNotOptimize(CovarianceData::build(tl, basis).rank());
}
BENCHMARK(BM_CovarianceBuild)->Arg(3)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PsdProject(benchmark::State& state) {
  const double j = static_cast<double>(state.range(0));
  const int d = static_cast<int>(2 * j) + 1;
  const OperatorTimeline tl = top_timeline(j, 50);
  const HermitianBasis basis = gell_mann_basis(d);
  const CovarianceData cov = CovarianceData::build(tl, basis);
  std::mt19937_64 rng(1);
  const CVec psi = haar_random_pure(d, rng);
  const MeasurementRecord rec = generate_record(pure_density(psi), tl, 0.1, 2);
  const BlochVector r_ml = ml_estimate(rec, cov);
  for (auto _ : state) benchmark::DoNotOptimize(psd_project(r_ml, cov, basis).residual);
}
BENCHMARK(BM_PsdProject)->Arg(3)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Lanczos(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const Superoperator l = Superoperator::liouvillian(ti_hamiltonian({L, 1.0, 1.4, 1.4, 1.0}));
  const CMat o = site_spin(L, 1, Axis::kY);
  for (auto _ : state) benchmark::DoNotOptimize(lanczos_full_orth(l, o).dim());
}
BENCHMARK(BM_Lanczos)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_HusimiEntropy(benchmark::State& state) {
  const double j = static_cast<double>(state.range(0));
  const SphereGrid grid = SphereGrid::gauss_legendre();
  const CMat table = coherent_state_table(j, grid);
  const CMat o = angular_momentum_ops(j).y;
  for (auto _ : state) benchmark::DoNotOptimize(husimi_entropy(o, grid, table));
}
BENCHMARK(BM_HusimiEntropy)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
