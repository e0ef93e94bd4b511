#include <benchmark/benchmark.h>

#include "popsim/dynamics.hpp"
#include "popsim/generators.hpp"
#include "popsim/hitting.hpp"

namespace {

using namespace popsim;

void BM_BroadcastCycle(benchmark::State& state) {
  const Graph g = make_cycle(static_cast<std::size_t>(state.range(0)));
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(broadcast_time(g, 0, rng));
}
BENCHMARK(BM_BroadcastCycle)->Arg(32)->Arg(128);

void BM_BroadcastClique(benchmark::State& state) {
  const Graph g = make_clique(static_cast<std::size_t>(state.range(0)));
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(broadcast_time(g, 0, rng));
}
BENCHMARK(BM_BroadcastClique)->Arg(32)->Arg(128);

void BM_ClassicHitting(benchmark::State& state) {
  const Graph g = make_gnp(static_cast<std::size_t>(state.range(0)), 0.2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(classic_hitting_exact(g, 0).residual);
}
BENCHMARK(BM_ClassicHitting)->Arg(64)->Arg(256);

void BM_IsolationTrace(benchmark::State& state) {
  const Graph g = make_torus({8, 8});
  Rng rng(11);
  for (auto _ : state) benchmark::DoNotOptimize(influencer_trace(g, 0, 2000, rng).completion);
}
BENCHMARK(BM_IsolationTrace);

}  // namespace

BENCHMARK_MAIN();
