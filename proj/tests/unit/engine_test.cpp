#include <gtest/gtest.h>

#include <array>

#include "popsim/engine.hpp"
#include "popsim/generators.hpp"
#include "popsim/token.hpp"

namespace popsim {
namespace {

// Every node keeps its label; node 0 is the only leader.
struct IdentityProtocol {
  using State = NodeId;
  State initial(NodeId v) const { return v; }
  std::pair<State, State> transition(State a, State b) const { return {a, b}; }
  Output output(State s) const { return s == 0 ? Output::leader : Output::follower; }
  bool valid(State) const { return true; }

  struct Monitor {
    Monitor(const IdentityProtocol&, const Graph&, std::span<const State>) {}
    void observe(const Interaction&, State, State, State, State) { ++seen; }
    bool stable() const { return true; }
    std::int64_t violations() const { return 0; }
    void report(Counters& c) const { c["seen"] = seen; }
    std::int64_t seen = 0;
  };
};

// Each node stores a snapshot of the partner's pre-interaction label.
struct ExchangeProtocol {
  struct State {
    NodeId label = 0;
    NodeId seen = kNoNode;
  };
  State initial(NodeId v) const { return {v, kNoNode}; }
  std::pair<State, State> transition(State a, State b) const {
    return {State{a.label, b.label}, State{b.label, a.label}};
  }
  Output output(const State&) const { return Output::follower; }
  bool valid(const State&) const { return true; }
};

// Produces a state the protocol rejects.
struct BrokenProtocol {
  using State = int;
  State initial(NodeId) const { return 0; }
  std::pair<State, State> transition(State a, State b) const { return {a + 1, b}; }
  Output output(State) const { return Output::follower; }
  bool valid(State s) const { return s < 3; }
};

static_assert(MonitoredProtocol<IdentityProtocol>);
static_assert(MonitoredProtocol<TokenProtocol>);
static_assert(Protocol<ExchangeProtocol>);
static_assert(!MonitoredProtocol<ExchangeProtocol>);

std::vector<std::size_t> pair_counts(const Graph& g, std::size_t draws, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> counts(n * n, 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    const auto in = sample_interaction(g, rng);
    EXPECT_TRUE(g.has_edge(in.initiator, in.responder));
    ++counts[in.initiator * n + in.responder];
  }
  return counts;
}

std::vector<std::size_t> ordered_adjacent(const Graph& g, const std::vector<std::size_t>& all) {
  std::vector<std::size_t> out;
  const std::size_t n = g.node_count();
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (g.has_edge(u, v)) out.push_back(all[u * n + v]);
  return out;
}

TEST(Scheduler, BothOrientationsOnK2) {
  const Graph g = make_clique(2);
  const auto c = pair_counts(g, 100000, 3);
  EXPECT_EQ(c[0 * 2 + 0] + c[1 * 2 + 1], 0u);
  EXPECT_NEAR(static_cast<double>(c[0 * 2 + 1]) / 100000.0, 0.5, 0.01);
}

TEST(Scheduler, SixOrderedPairsOnTriangle) {
  const Graph g = make_clique(3);
  const auto adj = ordered_adjacent(g, pair_counts(g, 120000, 4));
  ASSERT_EQ(adj.size(), 6u);
  for (auto c : adj) EXPECT_NEAR(static_cast<double>(c) / 120000.0, 1.0 / 6.0, 0.01);
}

TEST(Scheduler, ChiSquareOnCycle) {
  const Graph g = make_cycle(10);
  const auto adj = ordered_adjacent(g, pair_counts(g, 200000, 5));
  ASSERT_EQ(adj.size(), 20u);
  EXPECT_LT(chi_square_uniform(adj), chi_square_critical(19, 0.001));
}

TEST(Scheduler, ChiSquareOnStarIgnoresDegree) {
  const Graph g = make_star(6);
  const auto adj = ordered_adjacent(g, pair_counts(g, 100000, 6));
  ASSERT_EQ(adj.size(), 10u);
  EXPECT_LT(chi_square_uniform(adj), chi_square_critical(9, 0.001));
}

TEST(Scheduler, OneDrawPerStep) {
  const Graph g = make_cycle(7);
  Rng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    sample_interaction(g, a);
    b.below(14);
  }
  EXPECT_EQ(a(), b());
}

TEST(Step, SnapshotSemantics) {
  const Graph g = make_path(2);
  ExchangeProtocol p;
  auto config = initial_configuration(g, p);
  Rng rng(1);
  const auto in = step(config, p, rng);
  EXPECT_EQ(config.states[in.initiator].seen, in.responder);
  EXPECT_EQ(config.states[in.responder].seen, in.initiator);
  EXPECT_EQ(config.step, 1u);
  EXPECT_EQ(in.step, 1u);
}

TEST(Step, TouchesOnlyTheSampledPair) {
  const Graph g = make_cycle(9);
  ExchangeProtocol p;
  auto config = initial_configuration(g, p);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto before = config.states;
    const auto in = step(config, p, rng);
    for (NodeId v = 0; v < 9; ++v) {
      if (v == in.initiator || v == in.responder) continue;
      EXPECT_EQ(config.states[v].seen, before[v].seen);
    }
  }
}

TEST(Step, RejectsInvalidState) {
  const Graph g = make_clique(2);
  BrokenProtocol p;
  auto config = initial_configuration(g, p);
  Rng rng(3);
  EXPECT_THROW(
      {
        for (int i = 0; i < 20; ++i) step(config, p, rng);
      },
      std::logic_error);
}

TEST(Run, IdentityIsImmediatelyStable) {
  const Graph g = make_cycle(5);
  Rng rng(4);
  const auto r = run_until_stable(g, IdentityProtocol{}, rng, {});
  ASSERT_TRUE(r.stabilization_step);
  EXPECT_EQ(*r.stabilization_step, 0u);
  EXPECT_EQ(r.leader_node, NodeId{0});
  EXPECT_EQ(r.leader_degree, 2u);
  EXPECT_EQ(r.steps_run, 50u);
  EXPECT_EQ(r.counters.at("seen"), 50);
  EXPECT_EQ(r.invariant_violations, 0);
}

TEST(Run, ExplicitTail) {
  Rng rng(5);
  RunOptions opt;
  opt.tail_steps = 7;
  EXPECT_EQ(run_until_stable(make_star(4), IdentityProtocol{}, rng, opt).steps_run, 7u);
}

TEST(Run, TokenOnK2) {
  const Graph g = make_clique(2);
  const TokenProtocol p(make_candidates(2, CandidatePattern::all));
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    const auto r = run_until_stable(g, p, rng, {});
    ASSERT_TRUE(r.stabilization_step);
    // The first interaction whitens the responder's token, which eliminates it.
    EXPECT_EQ(*r.stabilization_step, 1u);
    EXPECT_EQ(r.invariant_violations, 0);
    EXPECT_EQ(r.counters.at("eliminations"), 1);
  }
}

TEST(Run, MaxStepsCountsAsFailure) {
  const Graph g = make_cycle(30);
  const TokenProtocol p(make_candidates(30, CandidatePattern::all));
  TrialOptions opt;
  opt.trials = 3;
  opt.run.max_steps = 10;
  const auto batch = run_trials(g, p, opt);
  EXPECT_EQ(batch.summary.failures, 3u);
  EXPECT_EQ(batch.summary.stabilized, 0u);
  for (const auto& r : batch.results) EXPECT_EQ(r.steps_run, 10u);
}

TEST(Trials, SeedsAreDerivedPerIndex) {
  const Graph g = make_cycle(8);
  const TokenProtocol p(make_candidates(8, CandidatePattern::all));
  TrialOptions opt;
  opt.trials = 5;
  opt.master_seed = 77;
  const auto batch = run_trials(g, p, opt);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(batch.results[i].seed, derive_seed(77, i));
    Rng rng(derive_seed(77, i));
    const auto single = run_until_stable(g, p, rng, opt.run);
    EXPECT_EQ(single.stabilization_step, batch.results[i].stabilization_step);
    EXPECT_EQ(single.leader_node, batch.results[i].leader_node);
  }
}

TEST(Trials, IndependentOfThreadCount) {
  const Graph g = make_torus({3, 4});
  const TokenProtocol p(make_candidates(12, CandidatePattern::half));
  TrialOptions opt;
  opt.trials = 16;
  opt.master_seed = 5;
  const auto one = run_trials(g, p, opt);
  opt.threads = 4;
  const auto four = run_trials(g, p, opt);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(one.results[i].stabilization_step, four.results[i].stabilization_step);
    EXPECT_EQ(one.results[i].leader_node, four.results[i].leader_node);
    EXPECT_EQ(one.results[i].counters, four.results[i].counters);
  }
  EXPECT_EQ(one.summary.steps.mean, four.summary.steps.mean);
  EXPECT_EQ(one.summary.counters, four.summary.counters);
}

TEST(Trials, RejectsZeroTrials) {
  TrialOptions opt;
  opt.trials = 0;
  EXPECT_THROW(run_trials(make_clique(3), IdentityProtocol{}, opt), std::invalid_argument);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 6) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { hits[i]++; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

}  // namespace
}  // namespace popsim
