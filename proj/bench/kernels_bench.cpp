// Copyright 2026 The Coarselab Authors
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

// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "coarselab/actions.hpp"
#include "coarselab/coarse.hpp"
#include "coarselab/cone.hpp"
#include "coarselab/odometer.hpp"

namespace coarselab {
namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_OdometerLipschitz(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(odometer_lipschitz_sweep(10, 2, mode(state)));
  }
}
BENCHMARK(BM_OdometerLipschitz)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GromovSweep(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gromov_consistency_sweep(10, &tree_distance, mode(state)));
  }
}
BENCHMARK(BM_GromovSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BornologousFreeGroup(benchmark::State& state) {
  const auto f2 = SpaceHandle::free_group();
  const auto h = FreeWord::reduce("abA");
  const PointMap right = [h](const Point& x) -> Point { return std::get<FreeWord>(x) * h; };
  for (auto _ : state) {
    benchmark::DoNotOptimize(bornologous_profile(right, f2, f2, {1, 2, 3, 4, 5, 6}, 6, mode(state)));
  }
}
BENCHMARK(BM_BornologousFreeGroup)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HigsonDefect(benchmark::State& state) {
  const auto z = SpaceHandle::lattice(1, false);
  const ScalarFunction f = [](const Point& p) {
    return std::sin(std::log1p(std::abs(static_cast<double>(std::get<LatticePoint>(p).coords[0]))));
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(higson_defect(f, "sin-log", z, 10, {10, 100, 1000, 10000}, 20000, mode(state)));
  }
}
BENCHMARK(BM_HigsonDefect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConeDiagnostic(benchmark::State& state) {
  const ConeMetric m(ConeGrid::geometric(BaseGraph::cycle(16, 2.0 * M_PI / 16), 1000, {10, 100}),
                     LambdaFunction::linear());
  for (auto _ : state) {
    benchmark::DoNotOptimize(compactification_diagnostic(m, 5.0, {10, 100, 1000}, 0.1, mode(state)));
  }
}
BENCHMARK(BM_ConeDiagnostic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OrbitLipschitz(benchmark::State& state) {
  const auto z = SpaceHandle::lattice(1, false);
  const auto act = actions::shift(LatticePoint{{3}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(isometry_orbit_lipschitz(act, z, LatticePoint{{0}}, 1000, mode(state)));
  }
}
BENCHMARK(BM_OrbitLipschitz)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace coarselab

BENCHMARK_MAIN();
