#include "popsim/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <ostream>
#include <stdexcept>
#include <string>

#include "popsim/metrics.hpp"

namespace popsim {

namespace {

void require_node(const Graph& g, NodeId v, const char* what) {
  if (v >= g.node_count()) throw std::out_of_range(std::string(what) + ": node out of range");
}

template <class Run>
SampleStats monte_carlo(std::size_t trials, std::uint64_t master_seed, unsigned threads, Run run) {
  if (trials < 2) throw std::invalid_argument("Monte Carlo estimate needs at least two trials");
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng(derive_seed(master_seed, i));
    values[i] = static_cast<double>(run(rng));
  });
  return summarize(values);
}

}  // namespace

std::uint64_t broadcast_time(const Graph& g, NodeId source, Rng& rng) {
  require_node(g, source, "broadcast_time");
  require_connected(g, "broadcast_time");
  const std::size_t n = g.node_count();
  std::vector<std::uint8_t> informed(n, 0);
  informed[source] = 1;
  std::size_t count = 1;
  std::uint64_t t = 0;
  while (count < n) {
    const Interaction in = sample_interaction(g, rng);
    ++t;
    const std::uint8_t a = informed[in.initiator], b = informed[in.responder];
    if (a != b) {
      informed[in.initiator] = informed[in.responder] = 1;
      ++count;
    }
  }
  return t;
}

BroadcastEstimate estimate_worst_broadcast(const Graph& g, std::size_t trials_per_source,
                                           std::uint64_t master_seed, const SourcePolicy& policy,
                                           unsigned threads) {
  if (trials_per_source < 2) throw std::invalid_argument("estimate_worst_broadcast: need >= 2 trials per source");
  require_connected(g, "estimate_worst_broadcast");
  const std::size_t n = g.node_count();

  std::vector<NodeId> sources;
  if (n <= policy.all_sources_limit) {
    for (NodeId v = 0; v < n; ++v) sources.push_back(v);
  } else {
    std::vector<std::uint8_t> chosen(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) == g.max_degree() || g.degree(v) == g.min_degree()) chosen[v] = 1;
    }
    Rng pick(derive_seed(master_seed, ~std::uint64_t{0}));
    for (std::size_t i = 0; i < policy.sampled_sources; ++i) chosen[pick.below(n)] = 1;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v]) sources.push_back(v);
    }
  }

  std::vector<double> times(sources.size() * trials_per_source);
  parallel_for(times.size(), threads, [&](std::size_t i) {
    const NodeId s = sources[i / trials_per_source];
    Rng rng(derive_seed(derive_seed(master_seed, s), i % trials_per_source));
    times[i] = static_cast<double>(broadcast_time(g, s, rng));
  });

  BroadcastEstimate out;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const std::span<const double> slice(times.data() + k * trials_per_source, trials_per_source);
    SourceEstimate e{sources[k], summarize(slice)};
    if (k == 0 || e.steps.mean > out.b_hat) {
      out.b_hat = e.steps.mean;
      out.ci = e.steps.ci95();
      out.sigma = e.steps.stderr_mean;
      out.argmax = e.source;
    }
    out.per_source.push_back(std::move(e));
  }
  return out;
}

std::optional<std::uint64_t> propagation_time(const Graph& g, NodeId source, std::uint32_t k, Rng& rng) {
  require_node(g, source, "propagation_time");
  const auto dist = bfs_distances(g, source);
  if (std::find(dist.begin(), dist.end(), k) == dist.end()) return std::nullopt;
  if (k == 0) return 0;
  std::vector<std::uint8_t> informed(g.node_count(), 0);
  informed[source] = 1;
  std::uint64_t t = 0;
  for (;;) {
    const Interaction in = sample_interaction(g, rng);
    ++t;
    const bool a = informed[in.initiator], b = informed[in.responder];
    if (a == b) continue;
    const NodeId fresh = a ? in.responder : in.initiator;
    informed[fresh] = 1;
    if (dist[fresh] == k) return t;
  }
}

InfluencerTrace influencer_trace(const Graph& g, NodeId v, std::uint64_t t_max, Rng& rng,
                                 const std::vector<std::uint64_t>& checkpoints) {
  require_node(g, v, "influencer_trace");
  const std::size_t n = g.node_count();
  const std::size_t words = (n + 63) / 64;
  // sets[u * words ..] is the bitset I_t(u).
  std::vector<std::uint64_t> sets(n * words, 0);
  for (NodeId u = 0; u < n; ++u) sets[u * words + u / 64] |= std::uint64_t{1} << (u % 64);

  std::vector<std::uint64_t> wanted = checkpoints;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  std::erase_if(wanted, [t_max](std::uint64_t t) { return t > t_max; });

  InfluencerTrace trace;
  trace.node = v;
  trace.sizes.reserve(t_max + 1);
  std::uint32_t size = 1;
  std::size_t next_checkpoint = 0;
  auto record = [&](std::uint64_t t) {
    trace.sizes.push_back(size);
    if (!trace.completion && size == n) trace.completion = t;
    if (next_checkpoint < wanted.size() && wanted[next_checkpoint] == t) {
      std::vector<NodeId> snapshot;
      for (NodeId u = 0; u < n; ++u) {
        if ((sets[v * words + u / 64] >> (u % 64)) & 1) snapshot.push_back(u);
      }
      trace.checkpoints.push_back(t);
      trace.snapshots.push_back(std::move(snapshot));
      ++next_checkpoint;
    }
  };
  record(0);
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    const Interaction in = sample_interaction(g, rng);
    std::uint64_t* a = &sets[in.initiator * words];
    std::uint64_t* b = &sets[in.responder * words];
    for (std::size_t w = 0; w < words; ++w) a[w] = b[w] = a[w] | b[w];
    if (in.initiator == v || in.responder == v) {
      size = 0;
      for (std::size_t w = 0; w < words; ++w) size += static_cast<std::uint32_t>(std::popcount(sets[v * words + w]));
    }
    record(t);
  }
  return trace;
}

Schedule record_schedule(const Graph& g, std::uint64_t steps, Rng& rng) {
  Schedule s;
  s.reserve(steps);
  for (std::uint64_t t = 1; t <= steps; ++t) s.push_back(sample_interaction(g, rng, t));
  return s;
}

InfluencerMultigraphStats influencer_multigraph(std::size_t n, const Schedule& schedule, NodeId v,
                                                 std::uint64_t t0) {
  if (t0 > schedule.size()) throw std::out_of_range("influencer_multigraph: t0 beyond the schedule");
  if (v >= n) throw std::out_of_range("influencer_multigraph: node out of range");
  InfluencerMultigraphStats out;
  std::vector<std::uint8_t> in_j(n, 0);
  in_j[v] = 1;
  std::vector<NodeId> members{v};
  for (std::uint64_t s = t0; s-- > 0;) {
    const Interaction& in = schedule[s];
    const bool a = in_j[in.initiator], b = in_j[in.responder];
    if (!a && !b) continue;
    ++out.edges;
    if (a && b) {
      ++out.internal;
    } else {
      const NodeId fresh = a ? in.responder : in.initiator;
      in_j[fresh] = 1;
      members.push_back(fresh);
    }
  }
  std::sort(members.begin(), members.end());
  out.nodes = std::move(members);
  return out;
}

InfluencerMultigraphStats influencer_multigraph(const Graph& g, NodeId v, std::uint64_t t0, Rng& rng) {
  require_node(g, v, "influencer_multigraph");
  return influencer_multigraph(g.node_count(), record_schedule(g, t0, rng), v, t0);
}

std::vector<NodeId> influencers_from_schedule(std::size_t n, const Schedule& schedule, NodeId v,
                                              std::uint64_t t0) {
  if (t0 > schedule.size()) throw std::out_of_range("influencers_from_schedule: t0 beyond the schedule");
  std::vector<std::vector<NodeId>> sets(n);
  for (NodeId u = 0; u < n; ++u) sets[u] = {u};
  for (std::uint64_t s = 0; s < t0; ++s) {
    const Interaction& in = schedule[s];
    std::vector<NodeId> merged;
    std::set_union(sets[in.initiator].begin(), sets[in.initiator].end(), sets[in.responder].begin(),
                   sets[in.responder].end(), std::back_inserter(merged));
    sets[in.initiator] = merged;
    sets[in.responder] = std::move(merged);
  }
  return sets[v];
}

SampleStats population_hitting_mc(const Graph& g, NodeId u, NodeId v, std::size_t trials,
                                  std::uint64_t master_seed, unsigned threads) {
  require_node(g, u, "population_hitting_mc");
  require_node(g, v, "population_hitting_mc");
  require_connected(g, "population_hitting_mc");
  return monte_carlo(trials, master_seed, threads, [&](Rng& rng) {
    NodeId x = u;
    std::uint64_t t = 0;
    while (x != v) {
      const Interaction in = sample_interaction(g, rng);
      ++t;
      if (in.initiator == x) {
        x = in.responder;
      } else if (in.responder == x) {
        x = in.initiator;
      }
    }
    return t;
  });
}

SampleStats meeting_time_mc(const Graph& g, NodeId u, NodeId v, std::size_t trials,
                            std::uint64_t master_seed, unsigned threads) {
  require_node(g, u, "meeting_time_mc");
  require_node(g, v, "meeting_time_mc");
  if (u == v) throw std::invalid_argument("meeting_time_mc: walks must start apart");
  require_connected(g, "meeting_time_mc");
  return monte_carlo(trials, master_seed, threads, [&](Rng& rng) {
    NodeId p = u, q = v;
    std::uint64_t t = 0;
    for (;;) {
      const Interaction in = sample_interaction(g, rng);
      ++t;
      const NodeId a = in.initiator, b = in.responder;
      if ((a == p && b == q) || (a == q && b == p)) return t;
      if (a == p) {
        p = b;
      } else if (b == p) {
        p = a;
      }
      if (a == q) {
        q = b;
      } else if (b == q) {
        q = a;
      }
    }
  });
}

void write_trace_csv(std::ostream& out, const InfluencerTrace& trace) {
  out << "step,size\n";
  for (std::size_t t = 0; t < trace.sizes.size(); ++t) out << t << ',' << trace.sizes[t] << '\n';
}

void write_broadcast_csv(std::ostream& out, const BroadcastEstimate& estimate) {
  out << "source,mean,ci\n";
  const auto flags = out.flags();
  const auto precision = out.precision(17);
  for (const auto& e : estimate.per_source) out << e.source << ',' << e.steps.mean << ',' << e.steps.ci95() << '\n';
  out.precision(precision);
  out.flags(flags);
}

}  // namespace popsim
