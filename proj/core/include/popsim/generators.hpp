#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "popsim/cover.hpp"
#include "popsim/graph.hpp"

namespace popsim {

enum class GraphFamily { clique, cycle, path, star, torus, gnp, lollipop };

std::string_view to_string(GraphFamily family) noexcept;
std::optional<GraphFamily> parse_graph_family(std::string_view name) noexcept;

/// Family-specific parameters. `n` is the node count for every family except
/// torus (which uses `dims`) and lollipop (clique size `n`, tail `tail`).
struct GraphParams {
  std::size_t n = 0;
  std::vector<std::size_t> dims;
  double p = 0.0;
  std::size_t tail = 0;
  std::optional<std::uint64_t> seed;
};

Graph make_clique(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_path(std::size_t n);
/// Node 0 is the centre, nodes 1..n-1 are leaves.
Graph make_star(std::size_t n);
Graph make_torus(const std::vector<std::size_t>& dims);
/// Erdos-Renyi G(n,p) conditioned on connectivity: attempt i uses the
/// sub-seed derive_seed(seed, i); throws std::runtime_error after
/// `max_attempts` disconnected samples.
Graph make_gnp(std::size_t n, double p, std::uint64_t seed, std::size_t max_attempts = 1000);
/// clique(n) with a pendant path of `tail` extra nodes hanging off node n-1.
Graph make_lollipop(std::size_t n, std::size_t tail);

/// Dispatches on the family; throws std::invalid_argument on bad parameters.
Graph generate(GraphFamily family, const GraphParams& params);

struct RenitentGraph {
  Graph graph;
  Cover cover;
};

/// Four copies of `base`; the hub copy in copy i is joined to the hub copy in
/// copy (i+1) mod 4 by a path of length 2 ell (2 ell - 1 fresh nodes). Copy c
/// occupies nodes [c |V|, (c+1) |V|); the internal nodes of path c follow all
/// copies. Cover set i is copy i plus the internal nodes of path i.
RenitentGraph generate_renitent(const Graph& base, NodeId hub, std::uint32_t ell);

enum class TargetRegime { dense, sparse };

struct TargetTimeGraph {
  Graph base;
  std::uint32_t ell = 0;
  double target = 0.0;  ///< T(N)
  RenitentGraph renitent;
};

/// Graph whose broadcast and leader-election time are of order T(N).
/// dense: base clique(N), ell = ceil(T/N^2).
/// sparse: base star(N) plus ceil(T/ell) leaf-leaf edges, ell = ceil(log2 N + T/(N log2 N)).
TargetTimeGraph generate_target_time(std::size_t N, const std::function<double(double)>& target,
                                     TargetRegime regime);

}  // namespace popsim
