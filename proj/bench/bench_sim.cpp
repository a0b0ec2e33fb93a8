// SPDX-License-Identifier: Apache-2.0
//
// orient3d: absolute 3D orientation from mmWave angle-of-arrival measurements
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial reference drivers against their OpenMP counterparts.
//
//   orient3d_bench --benchmark_filter=Grid
//
// Thread counts for the parallel variants are the benchmark argument.

#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "orient3d/scenario.hpp"
#include "orient3d/sim.hpp"

namespace {

using namespace orient3d;

constexpr int kSweepTrials = 100;
constexpr int kGrid = 32;

const std::vector<double>& sweep_grid() {
  static const std::vector<double> g = snr_grid(-40.0, 0.0, 5.0);
  return g;
}

void BM_RmseSweepSerial(benchmark::State& state) {
  const Scenario sc = default_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmse_vs_snr_serial(sc, sweep_grid(), kSweepTrials, 1));
  }
  state.SetItemsProcessed(state.iterations() * kSweepTrials * static_cast<long>(sweep_grid().size()));
}

void BM_RmseSweepParallel(benchmark::State& state) {
  const Scenario sc = default_scenario();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmse_vs_snr(sc, sweep_grid(), kSweepTrials, 1, threads));
  }
  state.SetItemsProcessed(state.iterations() * kSweepTrials * static_cast<long>(sweep_grid().size()));
}

void BM_GridSerial(benchmark::State& state) {
  const Scenario sc = default_scenario_three_bs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(oeb_orientation_grid_serial(sc, -std::numbers::pi / 4, kGrid, kGrid));
  }
  state.SetItemsProcessed(state.iterations() * kGrid * kGrid);
}

void BM_GridParallel(benchmark::State& state) {
  const Scenario sc = default_scenario_three_bs();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oeb_orientation_grid(sc, -std::numbers::pi / 4, kGrid, kGrid, threads));
  }
  state.SetItemsProcessed(state.iterations() * kGrid * kGrid);
}

}  // namespace

BENCHMARK(BM_RmseSweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RmseSweepParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
