#include <benchmark/benchmark.h>

#include <memory>

#include "bench_common.hpp"
#include "cnngp/latent_model.hpp"
#include "cnngp/model.hpp"

using namespace cnngp;

static void BM_ResponseFit(benchmark::State& state) {
  const auto d = bench::synthetic(state.range(0));
  ModelConfig cfg;
  cfg.kind = KernelKind::Response;
  for (auto _ : state) benchmark::DoNotOptimize(SpatialModel::fit(d, cfg).beta_mean());
}
BENCHMARK(BM_ResponseFit)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_ResponseSample(benchmark::State& state) {
  ModelConfig cfg;
  const auto m = SpatialModel::fit(bench::synthetic(10000), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(m.sample(state.range(0), 1).size());
}
BENCHMARK(BM_ResponseSample)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_LatentLsmrSolve(benchmark::State& state) {
  const auto d = bench::synthetic(state.range(0));
  const auto loc = LocationSet::create(d.coords, OrderingStrategy::Sum);
  const auto f = build_factor(build_training_neighbors(loc, 10), loc, CorrelationModel::exponential(6.0), 1.0,
                              KernelKind::Latent);
  const auto prior = PriorSpec::flat(2);
  const auto sys = assemble_augmented(loc.to_model_order(d.x), loc.to_model_order(d.y), f, prior, 0.9);
  LsmrOptions opts;
  for (auto _ : state) {
    std::vector<LsmrReport> reports;
    benchmark::DoNotOptimize(solve_augmented(sys, sys.ystar, opts, reports));
    state.counters["iterations"] = static_cast<double>(reports[0].iterations);
  }
}
BENCHMARK(BM_LatentLsmrSolve)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
