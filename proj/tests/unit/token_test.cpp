#include <gtest/gtest.h>

#include "popsim/engine.hpp"
#include "popsim/generators.hpp"
#include "popsim/token.hpp"

namespace popsim {
namespace {

constexpr TokenState C(Token t) { return {Role::candidate, t}; }
constexpr TokenState F(Token t) { return {Role::follower, t}; }

// Written out from the rules independently of token_transition.
std::pair<TokenState, TokenState> reference(TokenState a, TokenState b) {
  Token ta = b.token;
  Token tb = a.token;
  if (ta == Token::black && tb == Token::black) tb = Token::white;
  TokenState x{a.role, ta};
  TokenState y{b.role, tb};
  if (x.role == Role::candidate && x.token == Token::white) x = F(Token::none);
  if (y.role == Role::candidate && y.token == Token::white) y = F(Token::none);
  return {x, y};
}

TEST(TokenRules, HandPickedCases) {
  using T = std::pair<TokenState, TokenState>;
  EXPECT_EQ(token_transition(C(Token::black), C(Token::black)), (T{C(Token::black), F(Token::none)}));
  EXPECT_EQ(token_transition(C(Token::white), F(Token::none)), (T{C(Token::none), F(Token::white)}));
  EXPECT_EQ(token_transition(F(Token::black), C(Token::none)), (T{F(Token::none), C(Token::black)}));
  EXPECT_EQ(token_transition(F(Token::white), C(Token::none)), (T{F(Token::none), F(Token::none)}));
  EXPECT_EQ(token_transition(F(Token::black), F(Token::black)), (T{F(Token::black), F(Token::white)}));
  EXPECT_EQ(token_transition(F(Token::none), F(Token::none)), (T{F(Token::none), F(Token::none)}));
}

TEST(TokenRules, AllPairsAgreeWithReference) {
  for (auto a : kAllTokenStates)
    for (auto b : kAllTokenStates) EXPECT_EQ(token_transition(a, b), reference(a, b));
}

TEST(TokenRules, ConservationHoldsOnAllPairs) {
  EXPECT_EQ(count_conservation_breaks(token_transition), 0u);
}

TEST(TokenRules, DroppingTheResponderTokenBreaksConservation) {
  auto mutated = [](TokenState a, TokenState b) {
    std::swap(a.token, b.token);
    if (a.token == Token::black && b.token == Token::black) b.token = Token::none;
    return std::pair{a, b};
  };
  EXPECT_GT(count_conservation_breaks(mutated), 0u);
}

TEST(TokenRules, ConstexprAndOutputs) {
  static_assert(token_init(true) == C(Token::black));
  static_assert(token_init(false) == F(Token::none));
  static_assert(token_output(C(Token::none)) == Output::leader);
  static_assert(token_output(F(Token::black)) == Output::follower);
}

TEST(TokenCounts, AddAndConserved) {
  const std::vector<TokenState> s{C(Token::black), F(Token::white), C(Token::none), F(Token::none)};
  const auto c = token_counts(s);
  EXPECT_EQ(c.candidates, 2);
  EXPECT_EQ(c.black, 1);
  EXPECT_EQ(c.white, 1);
  EXPECT_TRUE(c.conserved());
  EXPECT_FALSE(token_stable(s));
  const std::vector<TokenState> no_black{C(Token::white), F(Token::none)};
  EXPECT_FALSE(token_counts(no_black).conserved());
}

TEST(Candidates, Patterns) {
  EXPECT_EQ(make_candidates(5, CandidatePattern::all), std::vector<bool>(5, true));
  EXPECT_EQ(make_candidates(5, CandidatePattern::half), (std::vector<bool>{true, false, true, false, true}));
  EXPECT_EQ(make_candidates(5, CandidatePattern::one), (std::vector<bool>{true, false, false, false, false}));
  for (auto p : {CandidatePattern::all, CandidatePattern::half, CandidatePattern::one})
    EXPECT_EQ(parse_candidate_pattern(to_string(p)), p);
  EXPECT_FALSE(parse_candidate_pattern("most"));
  EXPECT_THROW(TokenProtocol(std::vector<bool>(4, false)), std::invalid_argument);
}

TEST(TokenProtocol, SingleCandidateIsStableAtOnce) {
  const Graph g = make_cycle(10);
  const TokenProtocol p(make_candidates(10, CandidatePattern::one));
  Rng rng(1);
  const auto r = run_until_stable(g, p, rng, {});
  ASSERT_TRUE(r.stabilization_step);
  EXPECT_EQ(*r.stabilization_step, 0u);
  EXPECT_EQ(r.leader_node, NodeId{0});
  EXPECT_EQ(r.invariant_violations, 0);
}

class TokenRuns : public ::testing::TestWithParam<std::tuple<int, CandidatePattern>> {};

Graph family_graph(int which) {
  switch (which) {
    case 0: return make_clique(9);
    case 1: return make_cycle(11);
    case 2: return make_star(10);
    case 3: return make_gnp(14, 0.3, 21);
    default: return make_lollipop(6, 5);
  }
}

TEST_P(TokenRuns, ElectsCandidateWithoutViolations) {
  const auto [which, pattern] = GetParam();
  const Graph g = family_graph(which);
  const auto cand = make_candidates(g.node_count(), pattern);
  const TokenProtocol p(cand);
  TrialOptions opt;
  opt.trials = 30;
  opt.master_seed = 100 + static_cast<std::uint64_t>(which);
  opt.run.max_steps = 5'000'000;
  opt.run.tail_steps = 20 * g.node_count();
  const auto batch = run_trials(g, p, opt);
  EXPECT_EQ(batch.summary.failures, 0u);
  EXPECT_EQ(batch.summary.invariant_violations, 0);
  const auto c0 = std::count(cand.begin(), cand.end(), true);
  for (const auto& r : batch.results) {
    ASSERT_TRUE(r.leader_node);
    EXPECT_TRUE(cand[*r.leader_node]);
    EXPECT_EQ(r.counters.at("eliminations"), c0 - 1);
    EXPECT_EQ(r.leader_degree, g.degree(*r.leader_node));
  }
}

INSTANTIATE_TEST_SUITE_P(Families, TokenRuns,
                         ::testing::Combine(::testing::Range(0, 5),
                                            ::testing::Values(CandidatePattern::all, CandidatePattern::half,
                                                              CandidatePattern::one)));

TEST(TokenMonitor, TracksCountsIncrementally) {
  const Graph g = make_cycle(12);
  const TokenProtocol p(make_candidates(12, CandidatePattern::all));
  auto config = initial_configuration(g, p);
  TokenProtocol::Monitor mon(p, g, config.states);
  Rng rng(8);
  for (int i = 0; i < 3000; ++i) {
    const auto before = config.states;
    const auto in = step(config, p, rng);
    mon.observe(in, before[in.initiator], before[in.responder], config.states[in.initiator],
                config.states[in.responder]);
    ASSERT_EQ(mon.counts(), token_counts(config.states));
    ASSERT_EQ(mon.stable(), token_stable(config.states));
  }
  EXPECT_EQ(mon.violations(), 0);
}

}  // namespace
}  // namespace popsim
