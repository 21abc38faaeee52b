#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "cnngp/spatial.hpp"

using namespace cnngp;

static void BM_TrainingNeighbors(benchmark::State& state) {
  const auto d = bench::synthetic(state.range(0));
  const auto loc = LocationSet::create(d.coords, OrderingStrategy::Sum);
  for (auto _ : state) benchmark::DoNotOptimize(build_training_neighbors(loc, state.range(1)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TrainingNeighbors)->ArgsProduct({{10000, 40000, 160000}, {10}})->Unit(benchmark::kMillisecond)->Complexity();

static void BM_PredictionNeighbors(benchmark::State& state) {
  const auto ref = bench::synthetic(state.range(0));
  const auto q = bench::synthetic(1000, 9);
  for (auto _ : state) benchmark::DoNotOptimize(build_prediction_neighbors(ref.coords, q.coords, 10));
}
BENCHMARK(BM_PredictionNeighbors)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
