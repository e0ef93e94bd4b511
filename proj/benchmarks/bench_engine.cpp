#include <benchmark/benchmark.h>

#include "popsim/engine.hpp"
#include "popsim/fast.hpp"
#include "popsim/generators.hpp"
#include "popsim/maxid.hpp"
#include "popsim/token.hpp"

namespace {

using namespace popsim;

void BM_SchedulerDraw(benchmark::State& state) {
  const Graph g = make_cycle(static_cast<std::size_t>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_interaction(g, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SchedulerDraw)->Arg(64)->Arg(4096);

template <class P>
void run_to_stable(benchmark::State& state, const Graph& g, const P& protocol) {
  Rng rng(1);
  std::uint64_t steps = 0;
  RunOptions opt;
  opt.max_steps = 1'000'000'000;
  opt.tail_steps = 0;
  for (auto _ : state) {
    const auto r = run_until_stable(g, protocol, rng, opt);
    steps += r.steps_run;
    benchmark::DoNotOptimize(r.stabilization_step);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}

void BM_TokenClique(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  run_to_stable(state, make_clique(n), TokenProtocol(make_candidates(n, CandidatePattern::all)));
}
BENCHMARK(BM_TokenClique)->Arg(16)->Arg(64);

void BM_MaxIdCycle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  run_to_stable(state, make_cycle(n), MaxIdProtocol(maxid_params(n, true)));
}
BENCHMARK(BM_MaxIdCycle)->Arg(16)->Arg(32);

void BM_FastClique(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = make_clique(n);
  const double b_est = static_cast<double>(n) * 4.0;
  run_to_stable(state, g, FastProtocol(fast_params(b_est, g.max_degree(), g.edge_count(), n)));
}
BENCHMARK(BM_FastClique)->Arg(16)->Arg(32);

}  // namespace
