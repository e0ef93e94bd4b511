#include "popsim/suite.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "popsim/analysis.hpp"
#include "popsim/clock.hpp"
#include "popsim/cover.hpp"
#include "popsim/engine.hpp"
#include "popsim/fast.hpp"
#include "popsim/generators.hpp"
#include "popsim/hitting.hpp"
#include "popsim/maxid.hpp"
#include "popsim/token.hpp"

namespace popsim {

namespace {

using TokenRule = std::function<std::pair<TokenState, TokenState>(TokenState, TokenState)>;

std::pair<TokenState, TokenState> drop_instead_of_whiten(TokenState a, TokenState b) {
  std::swap(a.token, b.token);
  if (a.token == Token::black && b.token == Token::black) b.token = Token::none;
  for (TokenState* s : {&a, &b}) {
    if (s->role == Role::candidate && s->token == Token::white) *s = {Role::follower, Token::none};
  }
  return {a, b};
}

// Token protocol with a replaceable rule, for running a mutant under the
// regular monitor.
class RuleTokenProtocol {
 public:
  using State = TokenState;
  using Monitor = TokenProtocol::Monitor;

  RuleTokenProtocol(TokenProtocol base, TokenRule rule) : base_(std::move(base)), rule_(std::move(rule)) {}
  State initial(NodeId v) const { return base_.initial(v); }
  std::pair<State, State> transition(State a, State b) const { return rule_(a, b); }
  Output output(State s) const noexcept { return base_.output(s); }
  bool valid(State s) const noexcept { return base_.valid(s); }
  operator const TokenProtocol&() const noexcept { return base_; }

 private:
  TokenProtocol base_;
  TokenRule rule_;
};

struct Builder {
  SuiteReport report;

  void add(std::string name, bool passed, std::string detail = {}) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  }
};

std::string summary_detail(const TrialSummary& s) {
  std::ostringstream os;
  os << s.stabilized << "/" << s.trials << " stabilized, " << s.invariant_violations << " violations";
  return os.str();
}

}  // namespace

SuiteReport run_invariant_suite(const SuiteOptions& options) {
  Builder b;
  const TokenRule rule = options.corrupt_token_rule ? TokenRule(drop_instead_of_whiten)
                                                    : TokenRule([](TokenState x, TokenState y) { return token_transition(x, y); });

  // Token conservation over all ordered state pairs, then along runs.
  const std::size_t breaks = count_conservation_breaks(rule);
  b.add("token conservation on all 36 state pairs", breaks == 0, std::to_string(breaks) + " breaking pairs");
  {
    TrialOptions opts;
    opts.trials = 50;
    opts.master_seed = options.seed;
    opts.run.max_steps = 2'000'000;
    opts.threads = options.threads;
    std::int64_t violations = 0;
    std::size_t failures = 0;
    for (const Graph& g : {make_clique(12), make_cycle(12), make_star(13)}) {
      for (auto pattern : {CandidatePattern::all, CandidatePattern::half, CandidatePattern::one}) {
        const RuleTokenProtocol p(TokenProtocol(make_candidates(g.node_count(), pattern)), rule);
        const auto batch = run_trials(g, p, opts);
        violations += batch.summary.invariant_violations;
        failures += batch.summary.failures;
      }
    }
    b.add("token runs keep c = b + w and elect one leader", violations == 0 && failures == 0,
          std::to_string(violations) + " violations, " + std::to_string(failures) + " unstabilized");
  }

  // Streak distribution.
  {
    bool ok = true;
    for (unsigned h = 1; h <= 10; ++h) ok = ok && check_streak_expectation(h).relative_error < 1e-6;
    b.add("streak recurrence sums to 2^(h+1) - 2 for h = 1..10", ok);
    bool bounds = true, exact = true;
    for (unsigned h = 1; h <= 8; ++h) {
      const auto d = streak_survival(h, 200);
      const double p = std::ldexp(1.0, -static_cast<int>(h));
      for (std::size_t k = h; k <= 200; ++k) {
        const double lo = std::pow(1.0 - p, static_cast<double>(k));
        const double hi = std::pow(1.0 - p / 2.0, static_cast<double>(k - h));
        bounds = bounds && d.f[k] >= lo * (1 - 1e-12) && d.f[k] <= hi * (1 + 1e-12);
      }
      exact = exact && streak_recurrence_exact(h, 60);
    }
    b.add("streak survival within its geometric bounds for h <= 8, k <= 200", bounds);
    b.add("streak recurrence matches exact string counts for h <= 8", exact);
  }

  // Engine determinism across thread counts.
  {
    const Graph g = make_cycle(10);
    const TokenProtocol p(make_candidates(10, CandidatePattern::all));
    TrialOptions one;
    one.trials = 40;
    one.master_seed = options.seed;
    TrialOptions many = one;
    many.threads = std::max(2u, options.threads);
    const auto x = run_trials(g, p, one), y = run_trials(g, p, many);
    bool same = x.results.size() == y.results.size();
    for (std::size_t i = 0; same && i < x.results.size(); ++i) {
      same = x.results[i].stabilization_step == y.results[i].stabilization_step &&
             x.results[i].leader_node == y.results[i].leader_node && x.results[i].counters == y.results[i].counters;
    }
    b.add("trial results independent of thread count", same);
  }

  // Covers.
  {
    bool ok = true;
    for (std::size_t n : {16u, 32u}) ok = ok && verify_cover(make_cycle(n), cycle_cover(make_cycle(n))).ok();
    const auto r = generate_renitent(make_clique(4), 0, 3);
    ok = ok && verify_cover(r.graph, r.cover).ok();
    b.add("cycle and renitent covers verify", ok);
  }

  // Hitting solver.
  {
    const double clique = classic_hitting_worst(make_clique(10));
    const double cycle = classic_hitting_worst(make_cycle(6));
    b.add("classic hitting times on clique(10) and cycle(6)",
          std::fabs(clique - 9.0) < 1e-9 && std::fabs(cycle - 9.0) < 1e-9);
  }

  // Short protocol runs.
  {
    TrialOptions opts;
    opts.trials = 20;
    opts.master_seed = options.seed;
    opts.threads = options.threads;
    const Graph g = make_clique(16);
    const auto maxid = run_trials(g, MaxIdProtocol(maxid_params(16, false)), opts);
    b.add("maxid on clique(16)", maxid.summary.failures == 0 && maxid.summary.invariant_violations == 0,
          summary_detail(maxid.summary));
    const FastParams params = fast_params(89.0, 15, 120, 16);
    const auto fast = run_trials(g, FastProtocol(params), opts);
    b.add("fast protocol on clique(16)", fast.summary.failures == 0 && fast.summary.invariant_violations == 0,
          summary_detail(fast.summary));
  }

  return b.report;
}

}  // namespace popsim
