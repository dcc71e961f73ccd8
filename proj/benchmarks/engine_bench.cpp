#include <benchmark/benchmark.h>

#include "dynaring/engine.hpp"

namespace {

using namespace dynaring;

InitParams spread(int n, int k) {
  InitParams p;
  for (int i = 0; i < k; ++i) {
    p.positions.push_back(static_cast<NodeId>(static_cast<long>(i) * n / k));
    p.chiralities.push_back({i % 2 == 0});
  }
  return p;
}

void BM_StaticRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RingSpec ring(n);
  const Configuration initial = make_initial(ring, spread(n, 5));
  for (auto _ : state) {
    StaticSchedule sched(ring);
    benchmark::DoNotOptimize(run(ring, sched, initial, 10000, 0));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_StaticRun)->Arg(8)->Arg(12)->Arg(32);

void BM_BoundedRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const RingSpec ring(n);
  const Configuration initial = make_initial(ring, spread(n, 5));
  for (auto _ : state) {
    BoundedRecurrenceSchedule sched(ring, 8, 42);
    benchmark::DoNotOptimize(run(ring, sched, initial, 10000, 0));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_BoundedRun)->Arg(8)->Arg(12)->Arg(32);

void BM_ConfinerRun(benchmark::State& state) {
  const RingSpec ring(9);
  InitParams p;
  p.positions = {0};
  p.chiralities = {Chirality{true}};
  p.algorithm = Algorithm::PEF1;
  const Configuration initial = make_initial(ring, p);
  for (auto _ : state) {
    OneRobotConfinerSchedule sched(ring, 0);
    benchmark::DoNotOptimize(run(ring, sched, initial, 10000, 0));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ConfinerRun);

void BM_TraceFormat(benchmark::State& state) {
  const RingSpec ring(12);
  const Configuration initial = make_initial(ring, spread(12, 5));
  StaticSchedule sched(ring);
  const ExecutionTrace trace = run(ring, sched, initial, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(trace_text(trace));
}
BENCHMARK(BM_TraceFormat);

}  // namespace

BENCHMARK_MAIN();
