#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "popsim/graph.hpp"

namespace popsim {

inline constexpr std::size_t kMaxHittingNodes = 2000;

struct HittingSolution {
  NodeId target = 0;
  std::vector<double> times;  ///< expected steps from each node to target
  double residual = 0.0;      ///< max |A x - b| over the equations
};

/// Expected steps for the classic random walk to reach `target`:
/// h(target) = 0, h(u) = 1 + mean over neighbours w of h(w).
/// Dense elimination with partial pivoting; requires a connected graph with
/// n <= kMaxHittingNodes. Throws std::runtime_error if the residual exceeds 1e-9
/// relative to max(1, max h).
HittingSolution classic_hitting_exact(const Graph& g, NodeId target);

/// Population-model walk: the walk at x moves to a uniform neighbour when
/// the sampled edge contains x, so H(x) = m / deg(x) + mean_w H(w).
HittingSolution population_hitting_exact(const Graph& g, NodeId target);

struct HittingTable {
  std::size_t n = 0;
  std::vector<double> values;  ///< values[u * n + v] = h(u, v)
  double worst = 0.0;
  std::pair<NodeId, NodeId> worst_pair{0, 0};
  double max_residual = 0.0;

  double at(NodeId u, NodeId v) const { return values[static_cast<std::size_t>(u) * n + v]; }
};

HittingTable classic_hitting_table(const Graph& g);
HittingTable population_hitting_table(const Graph& g);

/// max over u, v of the classic hitting time.
double classic_hitting_worst(const Graph& g);

}  // namespace popsim
