#include "popsim/cover.hpp"

#include <algorithm>
#include <stdexcept>

namespace popsim {

namespace {

// Nodes of a cycle in traversal order starting at 0 towards its smaller neighbour.
std::vector<NodeId> cycle_order(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 3 || g.edge_count() != n || g.min_degree() != 2 || g.max_degree() != 2 ||
      !g.is_connected()) {
    throw std::invalid_argument("cycle_cover: input graph is not a cycle");
  }
  std::vector<NodeId> order{0};
  NodeId prev = kNoNode;
  NodeId cur = 0;
  while (order.size() < n) {
    auto nb = g.neighbors(cur);
    NodeId next = (nb[0] != prev) ? nb[0] : nb[1];
    if (prev == kNoNode) next = std::min(nb[0], nb[1]);
    prev = cur;
    cur = next;
    order.push_back(cur);
  }
  return order;
}

}  // namespace

Cover cycle_cover(const Graph& g, CycleCoverMode mode) {
  const std::size_t n = g.node_count();
  auto order = cycle_order(g);
  if (n < 16) throw std::invalid_argument("cycle_cover: need n >= 16");

  const std::size_t arc = (n + 3) / 4;
  Cover cover;
  if (mode == CycleCoverMode::paper) {
    cover.radius = static_cast<std::uint32_t>(arc);
  } else {
    // Gaps between arc 0 and arc 2 are `arc` and `n - 3 arc` nodes long; each
    // must hold two radii.
    cover.radius = static_cast<std::uint32_t>(std::min(arc, n - 3 * arc) / 2);
  }
  cover.disjoint_pair = {0, 2};

  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;

  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<NodeId> set;
    for (std::size_t j = 0; j < arc; ++j) set.push_back(order[(i * arc + j) % n]);
    std::sort(set.begin(), set.end());
    cover.sets.push_back(std::move(set));
  }
  cover.certificates = rotation_certificates(n, 4, [&](NodeId v) {
    return order[(position[v] + arc) % n];
  });
  return cover;
}

}  // namespace popsim
