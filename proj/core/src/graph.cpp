#include "popsim/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace popsim {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ >= kNoNode) throw std::invalid_argument("graph: too many nodes");
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("graph: self-loop at node " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_) throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw std::invalid_argument("graph: duplicate edge {" + std::to_string(dup->u) + "," +
                                std::to_string(dup->v) + "}");
  }

  std::vector<std::size_t> degree(n_, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
  if (n_ > 0) {
    auto [lo, hi] = std::minmax_element(degree.begin(), degree.end());
    min_degree_ = *lo;
    max_degree_ = *hi;
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= n_ || v >= n_) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::is_connected() const {
  if (n_ == 0) return false;
  std::vector<char> seen(n_, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

void require_connected(const Graph& g, const char* what) {
  if (!g.is_connected()) throw std::invalid_argument(std::string(what) + ": graph is not connected");
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::size_t& line_no) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };

  std::size_t line_no = 0;
  if (!next_line(line_no)) throw std::invalid_argument("edge list: missing header line");
  std::istringstream header(line);
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) {
    throw std::invalid_argument("edge list: malformed header at line " + std::to_string(line_no));
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line_no)) {
      throw std::invalid_argument("edge list: expected " + std::to_string(m) + " edges, found " +
                                  std::to_string(i));
    }
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0 || u >= n || v >= n) {
      throw std::invalid_argument("edge list: malformed edge at line " + std::to_string(line_no));
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

}  // namespace popsim
