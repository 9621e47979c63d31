#include <benchmark/benchmark.h>

#include "liberation/bridge.hpp"
#include "liberation/moment_engine.hpp"

using namespace liberation;

static void BM_MomentRhs(benchmark::State& state) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const MomentSequence f = initial_moments(InitialData::classical, p, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(moment_ode_rhs(f, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MomentRhs)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNSquared);

static void BM_EvolveToEquilibrium(benchmark::State& state) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const MomentSequence f0 = initial_moments(InitialData::classical, p, 64);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_moments(f0, p, 4.0, 1e-3, 100));
}
BENCHMARK(BM_EvolveToEquilibrium)->Unit(benchmark::kMillisecond);

static void BM_ProjectMoments(benchmark::State& state) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const MomentSequence f = stationary_moments(p, n);
  for (auto _ : state) benchmark::DoNotOptimize(project_moments(f, p, n));
}
BENCHMARK(BM_ProjectMoments)->Arg(16)->Arg(60);
