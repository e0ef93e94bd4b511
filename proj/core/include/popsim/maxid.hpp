#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>

#include "popsim/engine.hpp"
#include "popsim/graph.hpp"
#include "popsim/token.hpp"

namespace popsim {

/// Node state of the max-ID protocol: a growing identifier plus the token
/// state of the instance labelled by that identifier.
struct MaxIdState {
  std::uint64_t id = 1;
  TokenState sub{};

  friend bool operator==(const MaxIdState&, const MaxIdState&) = default;
};

/// k = ceil(4 log2 n), or ceil(3 log2 n) on regular graphs. Requires n >= 2.
unsigned maxid_params(std::size_t n, bool regular);

/// Number of states for a given k: 6 (2^{k+1} - 1).
double maxid_state_count(unsigned k);

/// Per node: (1) append a bit while id < 2^k (initiator 0, responder 1),
/// entering as (candidate, black) on crossing 2^k; (2) adopt the partner's
/// post-(1) id when it is larger and at least 2^k, resetting to
/// (follower, none); (3) token transition on the two sub-states.
std::pair<MaxIdState, MaxIdState> maxid_transition(MaxIdState a, MaxIdState b, unsigned k) noexcept;

/// All ids equal and at least 2^k, with exactly one candidate.
bool maxid_stable(std::span<const MaxIdState> states, unsigned k);

class MaxIdProtocol {
 public:
  using State = MaxIdState;

  explicit MaxIdProtocol(unsigned k);

  unsigned k() const noexcept { return k_; }
  std::uint64_t threshold() const noexcept { return threshold_; }

  State initial(NodeId) const noexcept { return {}; }
  std::pair<State, State> transition(const State& a, const State& b) const noexcept {
    return maxid_transition(a, b, k_);
  }
  Output output(const State& s) const noexcept { return token_output(s.sub); }
  bool valid(const State& s) const noexcept;

  /// Tracks the maximum id M, how many nodes hold it, token counts for every
  /// started instance, and how many nodes started each instance.
  class Monitor {
   public:
    Monitor(const MaxIdProtocol& protocol, const Graph& g, std::span<const State> states);

    void observe(const Interaction& in, const State& a0, const State& b0, const State& a1,
                 const State& b1);
    bool stable() const noexcept;
    std::int64_t violations() const noexcept { return violations_; }
    void report(Counters& out) const;

    std::uint64_t max_id() const noexcept { return max_id_; }
    /// Nodes that entered the current maximum instance through bit appends.
    std::int64_t max_starts() const;

   private:
    struct Instance {
      TokenCounts counts;
      std::int64_t starts = 0;
    };

    void move(const State& before, const State& after, bool responder);

    std::uint64_t threshold_;
    std::size_t n_;
    std::uint64_t max_id_ = 0;
    std::size_t at_max_ = 0;
    std::unordered_map<std::uint64_t, Instance> instances_;
    std::int64_t violations_ = 0;
    std::int64_t adoptions_ = 0;
  };

 private:
  unsigned k_;
  std::uint64_t threshold_;
};

}  // namespace popsim
