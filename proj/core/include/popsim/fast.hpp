#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "popsim/engine.hpp"
#include "popsim/graph.hpp"
#include "popsim/token.hpp"

namespace popsim {

struct FastParams {
  unsigned h = 1;     ///< streak length
  unsigned L = 2;     ///< elimination threshold
  unsigned Lmax = 4;  ///< backup threshold, alpha * L
  double tau = 1.0;
  unsigned alpha = 8;
};

/// h = 8 + ceil(log2(B_est * max_degree / m)) clamped to >= 1,
/// L = ceil(2 tau log2 n), Lmax = alpha * L.
FastParams fast_params(double b_est, std::size_t max_degree, std::size_t m, std::size_t n,
                       double tau = 1.0, unsigned alpha = 8);

/// Upper bound on the number of reachable states: h * 2 * (Lmax + 1) * 7.
double fast_state_count(const FastParams& params);

struct FastState {
  std::uint32_t streak = 0;
  std::uint32_t level = 0;
  bool leader = true;
  TokenState backup{};  ///< meaningful only at level Lmax

  friend bool operator==(const FastState&, const FastState&) = default;
};

constexpr bool backup_active(const FastState& s, const FastParams& p) noexcept { return s.level == p.Lmax; }

constexpr Output fast_output(const FastState& s, const FastParams& p) noexcept {
  if (backup_active(s, p)) return token_output(s.backup);
  return s.leader ? Output::leader : Output::follower;
}

std::pair<FastState, FastState> fast_transition(FastState a, FastState b, const FastParams& params) noexcept;

/// Exactly one node outputs leader, and its level is the maximum level.
bool fast_stable(std::span<const FastState> states, const FastParams& params);

class FastProtocol {
 public:
  using State = FastState;

  /// Every node starts as a leader unless `candidates` is given.
  explicit FastProtocol(FastParams params, std::vector<bool> candidates = {});

  const FastParams& params() const noexcept { return params_; }

  State initial(NodeId v) const noexcept {
    State s;
    s.leader = candidates_.empty() || candidates_[v];
    return s;
  }
  std::pair<State, State> transition(const State& a, const State& b) const noexcept {
    return fast_transition(a, b, params_);
  }
  Output output(const State& s) const noexcept { return fast_output(s, params_); }
  bool valid(const State& s) const noexcept;

  /// Tracks output-leader counts per level, the maximum level and token
  /// counts of the backup instance.
  class Monitor {
   public:
    Monitor(const FastProtocol& protocol, const Graph& g, std::span<const State> states);

    void observe(const Interaction& in, const State& a0, const State& b0, const State& a1,
                 const State& b1);
    bool stable() const noexcept { return leaders_ == 1 && leaders_at_[max_level_] == 1; }
    std::int64_t violations() const noexcept { return violations_; }
    void report(Counters& out) const;

    std::uint32_t max_level() const noexcept { return max_level_; }
    std::int64_t leaders() const noexcept { return leaders_; }

   private:
    void add(const State& s, std::int64_t sign);

    FastParams params_;
    std::vector<std::int64_t> leaders_at_;
    std::int64_t leaders_ = 0;
    std::uint32_t max_level_ = 0;
    TokenCounts backup_;
    std::int64_t backup_nodes_ = 0;
    std::int64_t violations_ = 0;
    std::int64_t demotions_ = 0;
    std::int64_t level_ups_ = 0;
  };

 private:
  FastParams params_;
  std::vector<bool> candidates_;
};

}  // namespace popsim
