#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "popsim/engine.hpp"
#include "popsim/graph.hpp"

namespace popsim {

enum class Role : std::uint8_t { follower, candidate };
enum class Token : std::uint8_t { none, black, white };

/// One of the six states of the token protocol.
struct TokenState {
  Role role = Role::follower;
  Token token = Token::none;

  friend bool operator==(const TokenState&, const TokenState&) = default;
};

constexpr TokenState token_init(bool is_candidate) noexcept {
  return is_candidate ? TokenState{Role::candidate, Token::black} : TokenState{Role::follower, Token::none};
}

constexpr Output token_output(TokenState s) noexcept {
  return s.role == Role::candidate ? Output::leader : Output::follower;
}

/// Tokens swap; two blacks meeting whiten the responder's; a candidate left
/// holding white becomes a follower and the white token leaves the system.
constexpr std::pair<TokenState, TokenState> token_transition(TokenState a, TokenState b) noexcept {
  std::swap(a.token, b.token);
  if (a.token == Token::black && b.token == Token::black) b.token = Token::white;
  for (TokenState* s : {&a, &b}) {
    if (s->role == Role::candidate && s->token == Token::white) *s = {Role::follower, Token::none};
  }
  return {a, b};
}

/// All six states, in a fixed order.
inline constexpr TokenState kAllTokenStates[] = {
    {Role::follower, Token::none},   {Role::follower, Token::black},
    {Role::follower, Token::white},  {Role::candidate, Token::none},
    {Role::candidate, Token::black}, {Role::candidate, Token::white},
};

struct TokenCounts {
  std::int64_t candidates = 0;
  std::int64_t black = 0;
  std::int64_t white = 0;

  void add(TokenState s, std::int64_t sign = 1) noexcept {
    candidates += sign * (s.role == Role::candidate);
    black += sign * (s.token == Token::black);
    white += sign * (s.token == Token::white);
  }
  /// c = b + w and b >= 1.
  bool conserved() const noexcept { return candidates == black + white && black >= 1; }

  friend bool operator==(const TokenCounts&, const TokenCounts&) = default;
};

TokenCounts token_counts(std::span<const TokenState> states);

/// Stable iff exactly one candidate remains. Because c = b + w and b >= 1,
/// c = 1 forces b = 1 and w = 0: no white token exists to eliminate the last
/// candidate, and followers never become candidates.
bool token_stable(std::span<const TokenState> states);

enum class CandidatePattern { all, half, one };

std::string_view to_string(CandidatePattern pattern) noexcept;
std::optional<CandidatePattern> parse_candidate_pattern(std::string_view name) noexcept;

/// all: every node; half: even-numbered nodes; one: node 0.
std::vector<bool> make_candidates(std::size_t n, CandidatePattern pattern);

/// Checks c - b - w is preserved by `transition` on all 36 ordered state
/// pairs; returns the number of pairs that break it.
template <class Transition>
std::size_t count_conservation_breaks(Transition transition) {
  std::size_t breaks = 0;
  for (TokenState a : kAllTokenStates) {
    for (TokenState b : kAllTokenStates) {
      TokenCounts before, after;
      before.add(a);
      before.add(b);
      auto [x, y] = transition(a, b);
      after.add(x);
      after.add(y);
      if (before.candidates - before.black - before.white !=
          after.candidates - after.black - after.white) {
        ++breaks;
      }
    }
  }
  return breaks;
}

class TokenProtocol {
 public:
  using State = TokenState;

  /// One candidate flag per node; at least one must be set.
  explicit TokenProtocol(std::vector<bool> candidates);

  State initial(NodeId v) const { return token_init(candidates_[v]); }
  std::pair<State, State> transition(State a, State b) const noexcept { return token_transition(a, b); }
  Output output(State s) const noexcept { return token_output(s); }
  bool valid(State s) const noexcept {
    return s.role <= Role::candidate && s.token <= Token::white;
  }

  const std::vector<bool>& candidates() const noexcept { return candidates_; }

  /// Tracks (c, b, w) incrementally; checks conservation every step.
  class Monitor {
   public:
    Monitor(const TokenProtocol& protocol, const Graph& g, std::span<const State> states);

    void observe(const Interaction&, State a0, State b0, State a1, State b1) noexcept {
      counts_.add(a0, -1);
      counts_.add(b0, -1);
      counts_.add(a1);
      counts_.add(b1);
      if (a0.token == Token::black && b0.token == Token::black) ++whitenings_;
      eliminations_ += (a0.role == Role::candidate && a1.role == Role::follower);
      eliminations_ += (b0.role == Role::candidate && b1.role == Role::follower);
      if (!counts_.conserved() || counts_.candidates < 1) ++violations_;
    }
    bool stable() const noexcept { return counts_.candidates == 1; }
    std::int64_t violations() const noexcept { return violations_; }
    const TokenCounts& counts() const noexcept { return counts_; }
    void report(Counters& out) const;

   private:
    TokenCounts counts_;
    std::int64_t whitenings_ = 0;
    std::int64_t eliminations_ = 0;
    std::int64_t violations_ = 0;
  };

 private:
  std::vector<bool> candidates_;
};

}  // namespace popsim
