#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "popsim/graph.hpp"

namespace popsim {

__extension__ using int128 = __int128;

inline constexpr std::uint32_t kUnreachable = 0xFFFFFFFFu;

/// Exact nonnegative rational, always stored in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return static_cast<int128>(a.num) * b.den < static_cast<int128>(b.num) * a.den;
  }
};

struct GraphMetrics {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint32_t diameter = 0;
  std::size_t max_degree = 0;
  std::size_t min_degree = 0;
  std::optional<Rational> edge_expansion;  ///< exact mode only
  std::optional<Rational> conductance;     ///< edge_expansion / max_degree
};

/// Breadth-first distances from `source`; kUnreachable for other components.
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source);

/// Multi-source breadth-first distances.
std::vector<std::uint32_t> bfs_distances(const Graph& g, std::span<const NodeId> sources);

std::uint32_t eccentricity(const Graph& g, NodeId v);

/// Exact diameter by all-sources BFS. Throws on a disconnected graph.
std::uint32_t diameter(const Graph& g);

/// Nodes within distance r of u, sorted ascending.
std::vector<NodeId> ball(const Graph& g, NodeId u, std::uint32_t r);

/// Nodes within distance r of some node in `set`, sorted ascending.
std::vector<NodeId> ball(const Graph& g, std::span<const NodeId> set, std::uint32_t r);

inline constexpr std::size_t kDefaultExactExpansionLimit = 20;

/// min |boundary(S)| / |S| over nonempty S with |S| <= n/2, by enumerating
/// every subset in Gray-code order. Throws std::domain_error when n exceeds
/// `max_nodes`.
Rational edge_expansion_exact(const Graph& g, std::size_t max_nodes = kDefaultExactExpansionLimit);

/// Computes the structural metrics; expansion only when n is within the exact
/// limit and `exact_expansion` is set.
GraphMetrics compute_metrics(const Graph& g, bool exact_expansion = true);

}  // namespace popsim
