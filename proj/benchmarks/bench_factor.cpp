#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "cnngp/vecchia.hpp"

using namespace cnngp;

static void BM_BuildFactor(benchmark::State& state) {
  const auto d = bench::synthetic(state.range(0));
  const auto loc = LocationSet::create(d.coords, OrderingStrategy::Sum);
  const auto g = build_training_neighbors(loc, state.range(1));
  const auto corr = CorrelationModel::exponential(6.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_factor(g, loc, corr, 0.9, KernelKind::Response));
}
BENCHMARK(BM_BuildFactor)->ArgsProduct({{10000, 100000}, {5, 10, 20}})->Unit(benchmark::kMillisecond);

// Rebuilding from a cached correlation table, as cross-validation does per alpha.
static void BM_BuildFactorFromTable(benchmark::State& state) {
  const auto d = bench::synthetic(state.range(0));
  const auto loc = LocationSet::create(d.coords, OrderingStrategy::Sum);
  const auto g = build_training_neighbors(loc, 10);
  const NeighborDistances dist(g, loc.coords(), loc.coords());
  const auto table = dist.correlations(CorrelationModel::exponential(6.0));
  for (auto _ : state) benchmark::DoNotOptimize(build_factor(table, 0.9, KernelKind::Response));
}
BENCHMARK(BM_BuildFactorFromTable)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Whiten(benchmark::State& state) {
  const auto d = bench::synthetic(state.range(0));
  const auto loc = LocationSet::create(d.coords, OrderingStrategy::Sum);
  const auto f = build_factor(build_training_neighbors(loc, 10), loc, CorrelationModel::exponential(6.0), 0.9,
                              KernelKind::Response);
  const Matrix y = loc.to_model_order(d.y);
  for (auto _ : state) benchmark::DoNotOptimize(whiten(f, y));
}
BENCHMARK(BM_Whiten)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
