#pragma once

#include <atomic>
#include <concepts>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "popsim/graph.hpp"
#include "popsim/rng.hpp"
#include "popsim/stats.hpp"

namespace popsim {

enum class Output : std::uint8_t { follower, leader };

/// One scheduler event: the ordered pair sampled at step `step` (1-based).
struct Interaction {
  NodeId initiator = 0;
  NodeId responder = 0;
  std::uint64_t step = 0;
};

/// Samples one of the 2m ordered adjacent pairs uniformly, using exactly one
/// bounded draw over [0, 2m): bit 0 picks the orientation, the rest the edge.
inline Interaction sample_interaction(const Graph& g, Rng& rng, std::uint64_t step = 0) noexcept {
  const std::uint64_t r = rng.below(2 * static_cast<std::uint64_t>(g.edge_count()));
  const Edge& e = g.edge(static_cast<std::size_t>(r >> 1));
  if (r & 1) return {e.v, e.u, step};
  return {e.u, e.v, step};
}

using Counters = std::map<std::string, std::int64_t>;

/// A population protocol: per-node initial state, a pure pairwise transition
/// (initiator first), an output map, and a membership check on the state space.
template <class P>
concept Protocol = requires(const P& p, const typename P::State& s, NodeId v) {
  typename P::State;
  { p.initial(v) } -> std::convertible_to<typename P::State>;
  { p.transition(s, s) } -> std::same_as<std::pair<typename P::State, typename P::State>>;
  { p.output(s) } -> std::same_as<Output>;
  { p.valid(s) } -> std::same_as<bool>;
};

/// Incremental stability predicate and invariant checker attached to a run.
///
/// The monitor sees every interaction with before/after states of both nodes
/// and must answer stable() in O(1). violations() counts invariant breaches
/// detected so far.
template <class M, class P>
concept ProtocolMonitor =
    requires(M& m, const M& cm, const Interaction& in, const typename P::State& s, Counters& c) {
      { m.observe(in, s, s, s, s) };
      { cm.stable() } -> std::same_as<bool>;
      { cm.violations() } -> std::convertible_to<std::int64_t>;
      { cm.report(c) };
    } && std::constructible_from<M, const P&, const Graph&, std::span<const typename P::State>>;

template <class P>
concept MonitoredProtocol = Protocol<P> && ProtocolMonitor<typename P::Monitor, P>;

template <class State>
struct Configuration {
  const Graph* graph = nullptr;
  std::vector<State> states;
  std::uint64_t step = 0;
};

template <Protocol P>
Configuration<typename P::State> initial_configuration(const Graph& g, const P& protocol) {
  Configuration<typename P::State> config{&g, {}, 0};
  config.states.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) config.states.push_back(protocol.initial(v));
  return config;
}

/// Applies one scheduler step. Both new states are computed from the
/// pre-interaction pair; a transition leaving the state space throws
/// std::logic_error.
template <Protocol P>
Interaction step(Configuration<typename P::State>& config, const P& protocol, Rng& rng) {
  const Interaction in = sample_interaction(*config.graph, rng, config.step + 1);
  auto& a = config.states[in.initiator];
  auto& b = config.states[in.responder];
  auto [next_a, next_b] = protocol.transition(a, b);
  if (!protocol.valid(next_a) || !protocol.valid(next_b)) {
    throw std::logic_error("transition produced a state outside the state space at step " +
                           std::to_string(in.step));
  }
  a = std::move(next_a);
  b = std::move(next_b);
  ++config.step;
  return in;
}

struct RunOptions {
  std::uint64_t max_steps = 10'000'000;
  /// Extra steps run after stabilization to check that no output changes.
  /// Defaults to 10 n when unset; 0 disables the tail.
  std::optional<std::uint64_t> tail_steps;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> stabilization_step;
  std::optional<NodeId> leader_node;
  std::size_t leader_degree = 0;
  std::int64_t invariant_violations = 0;
  std::int64_t tail_output_changes = 0;
  std::uint64_t steps_run = 0;
  Counters counters;
};

/// Runs until the monitor reports stability or max_steps is reached, then a
/// verification tail. Output changes during the tail, the monitor dropping
/// out of stability, and a stable configuration without a unique leader all
/// count as invariant violations.
template <MonitoredProtocol P>
TrialResult run_until_stable(const Graph& g, const P& protocol, Rng& rng, const RunOptions& options) {
  using State = typename P::State;
  TrialResult result;
  result.seed = rng.seed();

  auto config = initial_configuration(g, protocol);
  typename P::Monitor monitor(protocol, g, std::span<const State>(config.states));

  // Returns true if either participant's output changed.
  auto advance = [&]() -> bool {
    const Interaction in = sample_interaction(g, rng, config.step + 1);
    const State before_a = config.states[in.initiator];
    const State before_b = config.states[in.responder];
    auto [next_a, next_b] = protocol.transition(before_a, before_b);
    if (!protocol.valid(next_a) || !protocol.valid(next_b)) {
      throw std::logic_error("transition produced a state outside the state space at step " +
                             std::to_string(in.step));
    }
    const bool changed = protocol.output(next_a) != protocol.output(before_a) ||
                         protocol.output(next_b) != protocol.output(before_b);
    config.states[in.initiator] = std::move(next_a);
    config.states[in.responder] = std::move(next_b);
    ++config.step;
    monitor.observe(in, before_a, before_b, config.states[in.initiator],
                    config.states[in.responder]);
    return changed;
  };

  while (!monitor.stable() && config.step < options.max_steps) advance();

  if (monitor.stable()) {
    result.stabilization_step = config.step;
    std::size_t leaders = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (protocol.output(config.states[v]) == Output::leader) {
        ++leaders;
        result.leader_node = v;
      }
    }
    if (leaders == 1) {
      result.leader_degree = g.degree(*result.leader_node);
    } else {
      ++result.invariant_violations;
      result.leader_node.reset();
    }

    const std::uint64_t tail = options.tail_steps.value_or(10 * g.node_count());
    bool dropped = false;
    for (std::uint64_t i = 0; i < tail; ++i) {
      if (advance()) ++result.tail_output_changes;
      if (!dropped && !monitor.stable()) dropped = true;
    }
    result.invariant_violations += result.tail_output_changes + (dropped ? 1 : 0);
  }
  result.steps_run = config.step;
  result.invariant_violations += monitor.violations();
  monitor.report(result.counters);
  return result;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions are
/// rethrown on the caller after all workers stop.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct TrialOptions {
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  RunOptions run;
  unsigned threads = 1;
};

struct TrialSummary {
  std::size_t trials = 0;
  std::size_t stabilized = 0;
  std::size_t failures = 0;  ///< trials that hit max_steps
  std::int64_t invariant_violations = 0;
  SampleStats steps;         ///< over stabilized trials
  Counters counters;         ///< summed over trials
};

struct TrialBatch {
  std::vector<TrialResult> results;  ///< indexed by trial number
  TrialSummary summary;
};

TrialSummary summarize_trials(std::span<const TrialResult> results);

/// Trial i runs on Rng(derive_seed(master_seed, i)); results are stored by
/// index, so the batch does not depend on the thread count.
template <MonitoredProtocol P>
TrialBatch run_trials(const Graph& g, const P& protocol, const TrialOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
  TrialBatch batch;
  batch.results.resize(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(options.master_seed, i));
    batch.results[i] = run_until_stable(g, protocol, rng, options.run);
  });
  batch.summary = summarize_trials(batch.results);
  return batch;
}

}  // namespace popsim
