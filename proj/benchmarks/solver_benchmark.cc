// Copyright 2026 The cfedit Authors
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

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "cfedit/assignment.h"
#include "cfedit/gnn.h"

namespace cfedit {
namespace {

CostMatrix Uniform(int n, int m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(static_cast<size_t>(n) * m);
  for (double& v : values) v = unit(rng);
  return CostMatrix(n, m, std::move(values));
}

// Costs drawn from a handful of levels, as taxonomy path similarities are.
CostMatrix FewLevels(int n, int m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double levels[] = {0.1, 0.125, 1.0 / 6, 0.2, 0.25, 1.0 / 3};
  std::vector<double> values(static_cast<size_t>(n) * m);
  for (double& v : values) v = levels[rng() % 6];
  return CostMatrix(n, m, std::move(values));
}

void BM_SolveRlapSquare(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostMatrix cost = Uniform(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(SolveRlap(cost));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveRlapSquare)->RangeMultiplier(2)->Range(16, 1024)->Complexity()
    ->Unit(benchmark::kMillisecond);

// Fixed n, growing m: the rectangular case the graph builder produces.
void BM_SolveRlapWide(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const CostMatrix cost = Uniform(200, m, 2);
  for (auto _ : state) benchmark::DoNotOptimize(SolveRlap(cost));
  state.SetComplexityN(m);
}
BENCHMARK(BM_SolveRlapWide)->RangeMultiplier(2)->Range(256, 4096)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_SolveRlapFewLevels(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostMatrix cost = FewLevels(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(SolveRlap(cost));
}
BENCHMARK(BM_SolveRlapFewLevels)->RangeMultiplier(4)->Range(64, 1024)
    ->Unit(benchmark::kMillisecond);

void BM_SolveExhaustive(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostMatrix cost = Uniform(n, kExhaustiveMaxTargets, 4);
  for (auto _ : state) benchmark::DoNotOptimize(SolveExhaustive(cost));
}
BENCHMARK(BM_SolveExhaustive)->DenseRange(2, kExhaustiveMaxSources, 2)
    ->Unit(benchmark::kMillisecond);

void BM_GnnForwardAndDecode(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostMatrix cost = Uniform(n, 2 * n, 5);
  const BipartiteGraph graph = CostToGraph(cost);
  const GnnConfig config;
  const GnnModel model = GnnModel::Create(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DecodeAssignment(Forward(graph, model, config), cost));
  }
  state.SetItemsProcessed(state.iterations() * graph.num_edges());
}
BENCHMARK(BM_GnnForwardAndDecode)->RangeMultiplier(2)->Range(4, 128)
    ->Unit(benchmark::kMillisecond);

void BM_GnnTrainingStep(benchmark::State& state) {
  const auto samples = GenerateTrainingSet(1, {5, 5}, {8, 8}, 6);
  const BipartiteGraph graph = CostToGraph(samples[0].cost);
  const std::vector<double> labels = EdgeLabels(graph, samples[0].ground_truth);
  const GnnConfig config;
  const GnnModel model = GnnModel::Create(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeLossAndGradient(graph, labels, model, config));
  }
}
BENCHMARK(BM_GnnTrainingStep)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace cfedit

BENCHMARK_MAIN();
