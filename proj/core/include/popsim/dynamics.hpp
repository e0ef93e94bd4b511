#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "popsim/engine.hpp"
#include "popsim/graph.hpp"
#include "popsim/rng.hpp"
#include "popsim/stats.hpp"

namespace popsim {

/// Steps until every node is influenced by `source` under the epidemic where
/// both endpoints of a sampled edge share influence.
std::uint64_t broadcast_time(const Graph& g, NodeId source, Rng& rng);

struct SourcePolicy {
  /// Every node is a source when n is at most this.
  std::size_t all_sources_limit = 256;
  /// Otherwise this many sampled sources plus all min and max degree nodes.
  std::size_t sampled_sources = 64;
};

struct SourceEstimate {
  NodeId source = 0;
  SampleStats steps;
};

struct BroadcastEstimate {
  double b_hat = 0.0;  ///< max over sources of the mean broadcast time
  double ci = 0.0;     ///< 95% half-width at the argmax source
  double sigma = 0.0;  ///< standard error at the argmax source
  NodeId argmax = 0;
  std::vector<SourceEstimate> per_source;
};

/// Source order and seeds: trial t from source s uses
/// derive_seed(derive_seed(master_seed, s), t).
BroadcastEstimate estimate_worst_broadcast(const Graph& g, std::size_t trials_per_source,
                                           std::uint64_t master_seed, const SourcePolicy& policy = {},
                                           unsigned threads = 1);

/// First step at which influence from `source` reaches a node at distance
/// exactly k; nullopt when no such node exists.
std::optional<std::uint64_t> propagation_time(const Graph& g, NodeId source, std::uint32_t k, Rng& rng);

struct InfluencerTrace {
  NodeId node = 0;
  std::vector<std::uint32_t> sizes;  ///< sizes[t] = |I_t(node)|, t = 0..t_max
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<NodeId>> snapshots;  ///< I_t(node) at each checkpoint
  std::optional<std::uint64_t> completion;     ///< first t with |I_t| = n
};

/// Exact evolution of the influencer sets I_t(u) for all u, reporting those
/// of `v`. Checkpoints beyond t_max are ignored.
InfluencerTrace influencer_trace(const Graph& g, NodeId v, std::uint64_t t_max, Rng& rng,
                                 const std::vector<std::uint64_t>& checkpoints = {});

struct InfluencerMultigraphStats {
  std::vector<NodeId> nodes;  ///< node set of J_{t0}(v), sorted
  std::size_t edges = 0;
  std::size_t internal = 0;  ///< edges whose endpoints were both already in J
};

using Schedule = std::vector<Interaction>;

Schedule record_schedule(const Graph& g, std::uint64_t steps, Rng& rng);

/// Builds J_{t0}(v) by scanning the first t0 interactions of `schedule`
/// backwards from t0.
InfluencerMultigraphStats influencer_multigraph(std::size_t n, const Schedule& schedule, NodeId v,
                                                 std::uint64_t t0);

/// Records t0 fresh interactions and builds J_{t0}(v) from them.
InfluencerMultigraphStats influencer_multigraph(const Graph& g, NodeId v, std::uint64_t t0, Rng& rng);

/// Forward influencer set I_{t0}(v) computed from a recorded schedule.
std::vector<NodeId> influencers_from_schedule(std::size_t n, const Schedule& schedule, NodeId v,
                                              std::uint64_t t0);

/// Population-model walk from u: moves across the sampled edge when it
/// contains the walk's node. Returns statistics of the steps until it sits on v.
SampleStats population_hitting_mc(const Graph& g, NodeId u, NodeId v, std::size_t trials,
                                  std::uint64_t master_seed, unsigned threads = 1);

/// Two population walks from u and v; they meet at the first sampled edge
/// whose endpoints are their two positions, checked before either moves.
SampleStats meeting_time_mc(const Graph& g, NodeId u, NodeId v, std::size_t trials,
                            std::uint64_t master_seed, unsigned threads = 1);

/// Columns: step,size
void write_trace_csv(std::ostream& out, const InfluencerTrace& trace);
/// Columns: source,mean,ci
void write_broadcast_csv(std::ostream& out, const BroadcastEstimate& estimate);

}  // namespace popsim
