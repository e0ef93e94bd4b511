#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace popsim {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on nodes 0..n-1.
///
/// Edges are kept in lexicographic order so that an edge index means the same
/// thing regardless of how the graph was built (generator or file). Neighbour
/// lists are stored in one compressed array and are sorted.
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalises the edge list. Throws std::invalid_argument
  /// on self-loops, duplicate edges or out-of-range endpoints. Connectivity is
  /// not required here; see is_connected().
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t index) const noexcept { return edges_[index]; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t min_degree() const noexcept { return min_degree_; }

  bool has_edge(NodeId u, NodeId v) const noexcept;
  bool is_connected() const;

  /// Short human-readable family label, e.g. "cycle". Empty if unknown.
  const std::string& family() const noexcept { return family_; }
  void set_family(std::string family) { family_ = std::move(family); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::size_t max_degree_ = 0;
  std::size_t min_degree_ = 0;
  std::string family_;
};

/// Throws std::invalid_argument if g is not connected.
void require_connected(const Graph& g, const char* what);

/// Edge-list text format: first line "n m", then m lines "u v" with u < v.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace popsim
