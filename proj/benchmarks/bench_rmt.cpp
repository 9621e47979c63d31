#include <benchmark/benchmark.h>

#include "liberation/rmt.hpp"

using namespace liberation;

static void BM_UnitaryStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  UnitaryBrownianMotion bm(n, 0.01);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    bm.advance_to(t, rng);
  }
  benchmark::DoNotOptimize(bm.matrix().data());
}
BENCHMARK(BM_UnitaryStep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_GueIncrement(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(gue_increment(256, rng));
}
BENCHMARK(BM_GueIncrement)->Unit(benchmark::kMicrosecond);
