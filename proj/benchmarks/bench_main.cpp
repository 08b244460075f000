// Copyright 2026 The PBACC Authors.
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
#include <vector>

#include "pbacc/pbacc.hpp"

namespace {

using namespace pbacc;

Matrix RandomMatrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

void BM_BasisWeights(benchmark::State& state) {
  const auto grid = InterpolationGrid::Build(static_cast<std::size_t>(state.range(0)),
                                             static_cast<std::size_t>(state.range(0)), 200);
  std::size_t j = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BasisWeights(grid.zs()[j++ % grid.N()], grid.alphas()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.alphas().size()));
}
BENCHMARK(BM_BasisWeights)->Arg(100)->Arg(1000);

void BM_EncodePrivate(benchmark::State& state) {
  const std::size_t r = static_cast<std::size_t>(state.range(0));
  const auto grid = InterpolationGrid::Build(1000 / r, 1000 / r, 200);
  const Matrix x = RandomMatrix(1000, 1, 1);
  const MaskSpec mask{1000, 1e4, 2};
  for (auto _ : state) benchmark::DoNotOptimize(EncodePrivate(x, grid, mask, r));
}
BENCHMARK(BM_EncodePrivate)->Arg(1)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Decode(benchmark::State& state) {
  const auto grid = InterpolationGrid::Build(20, 20, 200);
  const auto shares = EncodePrivate(RandomMatrix(1000, 1, 3), grid, MaskSpec{1000, 1e4, 4}, 50);
  const std::vector<Share> fast(shares.begin(),
                                shares.begin() + static_cast<std::ptrdiff_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Decode(fast, grid));
}
BENCHMARK(BM_Decode)->Arg(100)->Arg(200);

void BM_WorkerMultiply(benchmark::State& state) {
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  const RowPacking packing{50, 1};
  const auto grid = MatrixGrid(K, packing, true, ChebyshevSecondKind(200));
  const Matrix masks = SampleRowMasks(K, 1, 10, 1e4, 5);
  const auto sa = EncodePacked(RandomMatrix(K, 10, 6), grid, packing, &masks);
  const auto sb = EncodePacked(RandomMatrix(K, 10, 7), grid, packing, &masks);
  for (auto _ : state) benchmark::DoNotOptimize(WorkerMultiply(sa[3], sb[3], grid, 50));
}
BENCHMARK(BM_WorkerMultiply)->Arg(500)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_LeakageBound(benchmark::State& state) {
  const auto grid = InterpolationGrid::Build(1000, 1000, 200);
  const auto scenario = CollusionScenario::Prefix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        LeakageBound(grid, scenario, 100.0, 1e4, RegularizationFloor::Absolute(6.97e-3)));
  }
}
BENCHMARK(BM_LeakageBound)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
