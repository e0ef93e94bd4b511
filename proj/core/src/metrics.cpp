#include "popsim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace popsim {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d <= 0) throw std::invalid_argument("rational: denominator must be positive");
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::span<const NodeId> sources) {
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> frontier;
  for (NodeId s : sources) {
    if (s >= g.node_count()) throw std::out_of_range("bfs: source out of range");
    if (dist[s] != 0) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  std::size_t head = 0;
  while (head < frontier.size()) {
    NodeId v = frontier[head++];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  return bfs_distances(g, std::span<const NodeId>(&source, 1));
}

std::uint32_t eccentricity(const Graph& g, NodeId v) {
  auto dist = bfs_distances(g, v);
  return *std::max_element(dist.begin(), dist.end());
}

std::uint32_t diameter(const Graph& g) {
  require_connected(g, "diameter");
  std::uint32_t d = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) d = std::max(d, eccentricity(g, v));
  return d;
}

std::vector<NodeId> ball(const Graph& g, std::span<const NodeId> set, std::uint32_t r) {
  auto dist = bfs_distances(g, set);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (dist[v] <= r) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> ball(const Graph& g, NodeId u, std::uint32_t r) {
  return ball(g, std::span<const NodeId>(&u, 1), r);
}

Rational edge_expansion_exact(const Graph& g, std::size_t max_nodes) {
  const std::size_t n = g.node_count();
  if (n > max_nodes || n > 30) {
    throw std::domain_error("edge_expansion_exact: n = " + std::to_string(n) +
                            " exceeds the exact-mode limit " + std::to_string(max_nodes));
  }
  if (n < 2) throw std::invalid_argument("edge_expansion_exact: need at least two nodes");

  std::vector<std::uint32_t> adj_mask(n, 0);
  for (const auto& e : g.edges()) {
    adj_mask[e.u] |= 1u << e.v;
    adj_mask[e.v] |= 1u << e.u;
  }

  // Walk all subsets in Gray-code order; toggling node x changes the boundary
  // by deg(x) - 2 |N(x) ∩ S| (computed before the toggle when adding).
  std::uint32_t set = 0;
  std::int64_t boundary = 0;
  std::int64_t best_num = 0;
  std::int64_t best_den = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int x = std::countr_zero(i);
    const std::uint32_t bit = 1u << x;
    const int inside = std::popcount(adj_mask[x] & set);
    const int deg = std::popcount(adj_mask[x]);
    if (set & bit) {
      set &= ~bit;
      boundary -= deg - 2 * inside;
    } else {
      set |= bit;
      boundary += deg - 2 * inside;
    }
    const auto size = static_cast<std::int64_t>(std::popcount(set));
    if (size == 0 || static_cast<std::size_t>(2 * size) > n) continue;
    if (best_den == 0 || boundary * best_den < best_num * size) {
      best_num = boundary;
      best_den = size;
    }
  }
  return Rational(best_num, best_den);
}

GraphMetrics compute_metrics(const Graph& g, bool exact_expansion) {
  GraphMetrics out;
  out.n = g.node_count();
  out.m = g.edge_count();
  out.diameter = diameter(g);
  out.max_degree = g.max_degree();
  out.min_degree = g.min_degree();
  if (exact_expansion && out.n >= 2 && out.n <= kDefaultExactExpansionLimit) {
    Rational beta = edge_expansion_exact(g);
    out.edge_expansion = beta;
    out.conductance = Rational(beta.num, beta.den * static_cast<std::int64_t>(out.max_degree));
  }
  return out;
}

}  // namespace popsim
