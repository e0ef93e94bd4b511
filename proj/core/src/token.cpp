#include "popsim/token.hpp"

#include <algorithm>
#include <stdexcept>

namespace popsim {

TokenCounts token_counts(std::span<const TokenState> states) {
  TokenCounts c;
  for (auto s : states) c.add(s);
  return c;
}

bool token_stable(std::span<const TokenState> states) {
  return token_counts(states).candidates == 1;
}

std::string_view to_string(CandidatePattern pattern) noexcept {
  switch (pattern) {
    case CandidatePattern::all: return "all";
    case CandidatePattern::half: return "half";
    case CandidatePattern::one: return "one";
  }
  return "unknown";
}

std::optional<CandidatePattern> parse_candidate_pattern(std::string_view name) noexcept {
  for (auto p : {CandidatePattern::all, CandidatePattern::half, CandidatePattern::one}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<bool> make_candidates(std::size_t n, CandidatePattern pattern) {
  std::vector<bool> out(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    switch (pattern) {
      case CandidatePattern::all: out[v] = true; break;
      case CandidatePattern::half: out[v] = (v % 2 == 0); break;
      case CandidatePattern::one: out[v] = (v == 0); break;
    }
  }
  return out;
}

TokenProtocol::TokenProtocol(std::vector<bool> candidates) : candidates_(std::move(candidates)) {
  if (std::none_of(candidates_.begin(), candidates_.end(), [](bool b) { return b; })) {
    throw std::invalid_argument("token protocol: the candidate set must be nonempty");
  }
}

TokenProtocol::Monitor::Monitor(const TokenProtocol&, const Graph&, std::span<const State> states)
    : counts_(token_counts(states)) {
  if (!counts_.conserved()) ++violations_;
}

void TokenProtocol::Monitor::report(Counters& out) const {
  out["whitenings"] += whitenings_;
  out["eliminations"] += eliminations_;
}

}  // namespace popsim
