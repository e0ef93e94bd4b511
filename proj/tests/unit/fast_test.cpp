#include <gtest/gtest.h>

#include <vector>

#include "popsim/engine.hpp"
#include "popsim/fast.hpp"
#include "popsim/generators.hpp"

namespace popsim {
namespace {

FastParams small_params() {
  FastParams p;
  p.h = 3;
  p.L = 4;
  p.Lmax = 8;
  p.alpha = 2;
  return p;
}

FastState node(std::uint32_t streak, std::uint32_t level, bool leader, TokenState backup = {}) {
  return {streak, level, leader, backup};
}

TEST(FastParams, CliqueSixteenExample) {
  const auto p = fast_params(89.0, 15, 120, 16);
  EXPECT_EQ(p.h, 12u);
  EXPECT_EQ(p.L, 8u);
  EXPECT_EQ(p.Lmax, 64u);
}

TEST(FastParams, ClampsAndScales) {
  EXPECT_EQ(fast_params(1.0, 1, 1000000, 16).h, 1u);
  EXPECT_EQ(fast_params(64.0, 2, 64, 64).h, 9u);
  EXPECT_EQ(fast_params(10.0, 3, 20, 64, 2.0, 3).L, 24u);
  EXPECT_EQ(fast_params(10.0, 3, 20, 64, 2.0, 3).Lmax, 72u);
  EXPECT_EQ(fast_params(10.0, 1, 1, 2).L, 2u);
  EXPECT_EQ(fast_params(10.0, 1, 1, 5).L, 5u);
}

TEST(FastParams, RejectsBadInput) {
  EXPECT_THROW(fast_params(0.0, 2, 10, 8), std::invalid_argument);
  EXPECT_THROW(fast_params(5.0, 0, 10, 8), std::invalid_argument);
  EXPECT_THROW(fast_params(5.0, 2, 10, 8, 0.5), std::invalid_argument);
  EXPECT_THROW(fast_params(5.0, 2, 10, 8, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(fast_params(5.0, 2, 10, 1), std::invalid_argument);
}

TEST(FastParams, StateCount) { EXPECT_DOUBLE_EQ(fast_state_count(small_params()), 3.0 * 2 * 9 * 7); }

TEST(FastRules, StreakCompletionRaisesLevel) {
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(2, 3, true), node(1, 0, false), p);
  EXPECT_EQ(x, node(0, 4, true));
  EXPECT_EQ(y, node(0, 0, false));
}

TEST(FastRules, StreakCountsOnlyInitiations) {
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(0, 1, true), node(2, 1, true), p);
  EXPECT_EQ(x, node(1, 1, true));
  EXPECT_EQ(y, node(0, 1, true));
}

TEST(FastRules, FollowerDoesNotClimbOnItsOwn) {
  const auto [x, y] = fast_transition(node(2, 1, false), node(0, 0, true), small_params());
  EXPECT_EQ(x, node(0, 1, false));
  EXPECT_EQ(y.level, 0u);
}

TEST(FastRules, FollowerLiftedToThreshold) {
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(0, 2, false), node(0, 4, true), p);
  EXPECT_EQ(x, node(1, 4, false));
  EXPECT_EQ(y, node(0, 4, true));
}

TEST(FastRules, LowerLeaderDemotedThenLifted) {
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(0, 4, true), node(0, 5, true), p);
  EXPECT_EQ(x, node(1, 5, false));
  EXPECT_EQ(y, node(0, 5, true));
}

TEST(FastRules, NoEliminationBelowThreshold) {
  const auto [x, y] = fast_transition(node(0, 1, true), node(0, 3, true), small_params());
  EXPECT_TRUE(x.leader);
  EXPECT_EQ(x.level, 1u);
  EXPECT_TRUE(y.leader);
}

TEST(FastRules, UsesSnapshotOfPartnerLevel) {
  // The responder's demotion check sees the initiator's level before its climb.
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(2, 4, true), node(0, 4, true), p);
  EXPECT_EQ(x, node(0, 5, true));
  EXPECT_EQ(y, node(0, 4, true));
}

TEST(FastRules, BackupEntryOnReachingLmax) {
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(2, 7, true), node(0, 0, false), p);
  EXPECT_EQ(x, node(0, 8, true, {Role::candidate, Token::black}));
  EXPECT_TRUE(backup_active(x, p));
  // The responder is lifted to the initiator's snapshot level.
  EXPECT_EQ(y.level, 7u);
  EXPECT_FALSE(backup_active(y, p));
}

TEST(FastRules, FollowerEntersBackupAsFollower) {
  const auto p = small_params();
  const auto [x, y] = fast_transition(node(0, 5, false), node(0, 8, true, {Role::candidate, Token::black}), p);
  EXPECT_EQ(x.level, 8u);
  // Entry gives (follower, none); both are then backup-active, so the tokens swap.
  EXPECT_EQ(x.backup, (TokenState{Role::follower, Token::black}));
  EXPECT_EQ(y.backup, (TokenState{Role::candidate, Token::none}));
  EXPECT_EQ(fast_output(y, p), Output::leader);
}

TEST(FastRules, BackupTokensInteract) {
  const auto p = small_params();
  const TokenState cb{Role::candidate, Token::black};
  const auto [x, y] = fast_transition(node(0, 8, true, cb), node(0, 8, true, cb), p);
  EXPECT_EQ(x.backup, cb);
  EXPECT_EQ(y.backup, (TokenState{Role::follower, Token::none}));
  EXPECT_EQ(fast_output(y, p), Output::follower);
  EXPECT_EQ(fast_output(x, p), Output::leader);
}

TEST(FastRules, OutputFollowsStatusBelowLmax) {
  const auto p = small_params();
  EXPECT_EQ(fast_output(node(0, 3, true), p), Output::leader);
  EXPECT_EQ(fast_output(node(0, 3, false), p), Output::follower);
  EXPECT_EQ(fast_output(node(0, 8, true, {Role::follower, Token::black}), p), Output::follower);
}

TEST(FastStable, Examples) {
  const auto p = small_params();
  std::vector<FastState> a{node(0, 7, true), node(0, 7, false), node(0, 2, false)};
  EXPECT_TRUE(fast_stable(a, p));
  std::vector<FastState> b{node(0, 5, true), node(0, 7, false), node(0, 2, false)};
  EXPECT_FALSE(fast_stable(b, p));
  std::vector<FastState> c{node(0, 8, false, {Role::candidate, Token::none}),
                           node(0, 8, true, {Role::follower, Token::black}),
                           node(0, 8, true, {Role::follower, Token::none})};
  EXPECT_TRUE(fast_stable(c, p));
  std::vector<FastState> d{node(0, 3, true), node(0, 3, true)};
  EXPECT_FALSE(fast_stable(d, p));
}

TEST(FastProtocol, InitialStatesAndValidity) {
  const FastProtocol p(small_params());
  EXPECT_EQ(p.initial(3), node(0, 0, true));
  EXPECT_EQ(p.output(p.initial(0)), Output::leader);
  EXPECT_FALSE(p.valid(node(3, 0, true)));
  EXPECT_FALSE(p.valid(node(0, 9, true)));
  EXPECT_FALSE(p.valid(node(0, 2, true, {Role::candidate, Token::black})));
  EXPECT_TRUE(p.valid(node(0, 8, true, {Role::candidate, Token::black})));
  const FastProtocol q(small_params(), {false, true});
  EXPECT_FALSE(q.initial(0).leader);
  EXPECT_THROW(FastProtocol(small_params(), {false, false}), std::invalid_argument);
  auto bad = small_params();
  bad.Lmax = bad.L;
  EXPECT_THROW(FastProtocol{bad}, std::invalid_argument);
}

void trace(const Graph& g, const FastParams& params, std::uint64_t seed) {
  const FastProtocol p(params);
  auto config = initial_configuration(g, p);
  FastProtocol::Monitor mon(p, g, config.states);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < 400000 && !mon.stable(); ++i) {
    const auto before = config.states;
    const auto in = step(config, p, rng);
    mon.observe(in, before[in.initiator], before[in.responder], config.states[in.initiator],
                config.states[in.responder]);
    std::uint32_t max_level = 0;
    for (const auto& s : config.states) max_level = std::max(max_level, s.level);
    bool leader_at_max = false;
    for (const auto& s : config.states) leader_at_max |= (s.level == max_level && p.output(s) == Output::leader);
    ASSERT_TRUE(leader_at_max) << "step " << i;
    ASSERT_EQ(mon.max_level(), max_level);
    ASSERT_EQ(mon.stable(), fast_stable(config.states, params));
  }
  EXPECT_TRUE(mon.stable());
  EXPECT_EQ(mon.violations(), 0);
}

TEST(FastMonitor, AgreesWithRecomputation) {
  trace(make_clique(8), small_params(), 1);
  trace(make_cycle(8), small_params(), 2);
  trace(make_star(6), small_params(), 3);
}

class FastRuns : public ::testing::TestWithParam<int> {};

TEST_P(FastRuns, StabilizeWithoutViolations) {
  Graph g;
  switch (GetParam()) {
    case 0: g = make_clique(16); break;
    case 1: g = make_cycle(16); break;
    case 2: g = make_star(12); break;
    default: g = make_torus({4, 4}); break;
  }
  FastParams params;
  params.h = 4;
  params.L = 8;
  params.Lmax = 16;
  params.alpha = 2;
  const FastProtocol p(params);
  TrialOptions opt;
  opt.trials = 40;
  opt.master_seed = 500 + static_cast<std::uint64_t>(GetParam());
  opt.run.max_steps = 50'000'000;
  opt.run.tail_steps = 20 * g.node_count();
  const auto batch = run_trials(g, p, opt);
  EXPECT_EQ(batch.summary.failures, 0u);
  EXPECT_EQ(batch.summary.invariant_violations, 0);
}

INSTANTIATE_TEST_SUITE_P(Graphs, FastRuns, ::testing::Range(0, 4));

TEST(FastRuns, BackupResolvesWhenLmaxIsReachedFast) {
  // With h = 1 every initiation completes a streak, so several leaders can
  // reach Lmax together and the token backup must finish the election.
  FastParams params;
  params.h = 1;
  params.L = 2;
  params.Lmax = 4;
  params.alpha = 2;
  const Graph g = make_clique(10);
  const FastProtocol p(params);
  TrialOptions opt;
  opt.trials = 50;
  opt.master_seed = 7;
  opt.run.tail_steps = 200;
  const auto batch = run_trials(g, p, opt);
  EXPECT_EQ(batch.summary.failures, 0u);
  EXPECT_EQ(batch.summary.invariant_violations, 0);
  EXPECT_GT(batch.summary.counters.at("backup_nodes"), 0);
}

}  // namespace
}  // namespace popsim
