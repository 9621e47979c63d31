#include <benchmark/benchmark.h>

#include "liberation/subordination.hpp"
#include "liberation/transforms.hpp"

using namespace liberation;

static void BM_FreeConvolution(benchmark::State& state) {
  const HerglotzEvaluator h = HerglotzEvaluator::free_initial(TraceParams::from_traces(0.5, 0.3));
  const cplx z(0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(h(z));
}
BENCHMARK(BM_FreeConvolution);

static void BM_SeriesHerglotz(benchmark::State& state) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator h = HerglotzEvaluator::from_moments(stationary_moments(p, 128), p, 0.9);
  const cplx z(0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(h(z));
}
BENCHMARK(BM_SeriesHerglotz);

static void BM_FlowOde(benchmark::State& state) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator h0 = HerglotzEvaluator::classical_independent(p);
  for (auto _ : state) benchmark::DoNotOptimize(flow_ode(cplx(0.2, 0.1), p, h0, 1.0, 1e-4, 100));
}
BENCHMARK(BM_FlowOde)->Unit(benchmark::kMillisecond);

static void BM_ClosedFormPhi(benchmark::State& state) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator h0 = HerglotzEvaluator::classical_independent(p);
  for (auto _ : state) benchmark::DoNotOptimize(phi_closed_form(0.2, 1.0, p, h0));
}
BENCHMARK(BM_ClosedFormPhi);
