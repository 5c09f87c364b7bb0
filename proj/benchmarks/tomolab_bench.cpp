// Copyright 2026 The tomolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "tomolab/ensembles.hpp"
#include "tomolab/infometrics.hpp"
#include "tomolab/qcore.hpp"
#include "tomolab/rmtref.hpp"
#include "tomolab/tomograph.hpp"

namespace {

using namespace tomolab;

Observable jx(Index d) { return Observable::from_matrix(spin_operators(0.5 * static_cast<double>(d - 1)).jx); }

void BM_HaarUnitary(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_haar_unitary(d, rng));
}
BENCHMARK(BM_HaarUnitary)->Arg(7)->Arg(21);

void BM_DesignMatrix(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const OperatorBasis basis = make_hermitian_basis(d);
  for (auto _ : state) {
    UnitaryProcess proc(policy::DiagonalRandom{}, d, RandomStream(2));
    benchmark::DoNotOptimize(design_matrix(run_trajectory(jx(d), proc, static_cast<std::size_t>(6 * d * d)), basis));
  }
}
BENCHMARK(BM_DesignMatrix)->Arg(7)->Arg(21)->Unit(benchmark::kMillisecond);

void BM_MlEstimate(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const OperatorBasis basis = make_hermitian_basis(d);
  RandomStream rng(3);
  UnitaryProcess proc(policy::HaarPerStep{}, d, rng.child(0));
  const DesignMatrix m = design_matrix(run_trajectory(jx(d), proc, static_cast<std::size_t>(6 * d * d)), basis);
  const BlochVector truth = bloch_decompose(sample_pure_state(d, rng), basis);
  const MeasurementRecord rec = synth_record(m, truth, 1.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ml_estimate(m, rec, 1.0, static_cast<double>(d * d)));
}
BENCHMARK(BM_MlEstimate)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_ProjectPhysical(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  const OperatorBasis basis = make_hermitian_basis(d);
  RandomStream rng(4);
  UnitaryProcess proc(policy::DiagonalRandom{}, d, rng.child(0));
  const DesignMatrix m = design_matrix(run_trajectory(jx(d), proc, static_cast<std::size_t>(6 * d * d)), basis);
  const BlochVector truth = bloch_decompose(sample_pure_state(d, rng), basis);
  const BlochVector ml = ml_estimate(m, synth_record(m, truth, 1.0, rng), 1.0, static_cast<double>(d * d));
  const InverseCovariance w = inverse_covariance(m, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_physical(ml, w, basis));
}
BENCHMARK(BM_ProjectPhysical)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_MpEntropy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mp_entropy(mp_law(440, 2646)));
}
BENCHMARK(BM_MpEntropy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
