#include "popsim/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "popsim/metrics.hpp"
#include "popsim/rng.hpp"

namespace popsim {

std::string_view to_string(GraphFamily family) noexcept {
  switch (family) {
    case GraphFamily::clique: return "clique";
    case GraphFamily::cycle: return "cycle";
    case GraphFamily::path: return "path";
    case GraphFamily::star: return "star";
    case GraphFamily::torus: return "torus";
    case GraphFamily::gnp: return "gnp";
    case GraphFamily::lollipop: return "lollipop";
  }
  return "unknown";
}

std::optional<GraphFamily> parse_graph_family(std::string_view name) noexcept {
  for (auto f : {GraphFamily::clique, GraphFamily::cycle, GraphFamily::path, GraphFamily::star,
                 GraphFamily::torus, GraphFamily::gnp, GraphFamily::lollipop}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

namespace {

void require_nodes(std::size_t n, std::size_t least, const char* what) {
  if (n < least) {
    throw std::invalid_argument(std::string(what) + ": need n >= " + std::to_string(least) +
                                ", got " + std::to_string(n));
  }
}

Graph labelled(Graph g, std::string family) {
  g.set_family(std::move(family));
  return g;
}

}  // namespace

Graph make_clique(std::size_t n) {
  require_nodes(n, 2, "clique");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return labelled(Graph(n, std::move(edges)), "clique");
}

Graph make_cycle(std::size_t n) {
  require_nodes(n, 3, "cycle");
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) edges.push_back({u, static_cast<NodeId>((u + 1) % n)});
  return labelled(Graph(n, std::move(edges)), "cycle");
}

Graph make_path(std::size_t n) {
  require_nodes(n, 2, "path");
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return labelled(Graph(n, std::move(edges)), "path");
}

Graph make_star(std::size_t n) {
  require_nodes(n, 2, "star");
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({0, v});
  return labelled(Graph(n, std::move(edges)), "star");
}

Graph make_torus(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw std::invalid_argument("torus: need at least one dimension");
  std::size_t n = 1;
  for (std::size_t side : dims) {
    if (side < 3) throw std::invalid_argument("torus: every side must be >= 3");
    n *= side;
  }
  std::vector<Edge> edges;
  std::size_t stride = 1;
  for (std::size_t side : dims) {
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t coord = (v / stride) % side;
      const std::size_t w = v - coord * stride + ((coord + 1) % side) * stride;
      edges.push_back({static_cast<NodeId>(v), static_cast<NodeId>(w)});
    }
    stride *= side;
  }
  return labelled(Graph(n, std::move(edges)), "torus");
}

Graph make_gnp(std::size_t n, double p, std::uint64_t seed, std::size_t max_attempts) {
  require_nodes(n, 2, "gnp");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: p must lie in (0, 1]");
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (rng.bernoulli(p)) edges.push_back({u, v});
    Graph g(n, std::move(edges));
    if (g.is_connected()) return labelled(std::move(g), "gnp");
  }
  throw std::runtime_error("gnp: no connected sample within " + std::to_string(max_attempts) +
                           " attempts (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
}

Graph make_lollipop(std::size_t n, std::size_t tail) {
  require_nodes(n, 2, "lollipop");
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  for (std::size_t i = 0; i < tail; ++i) {
    edges.push_back({static_cast<NodeId>(n - 1 + i), static_cast<NodeId>(n + i)});
  }
  return labelled(Graph(n + tail, std::move(edges)), "lollipop");
}

Graph generate(GraphFamily family, const GraphParams& params) {
  switch (family) {
    case GraphFamily::clique: return make_clique(params.n);
    case GraphFamily::cycle: return make_cycle(params.n);
    case GraphFamily::path: return make_path(params.n);
    case GraphFamily::star: return make_star(params.n);
    case GraphFamily::torus: return make_torus(params.dims);
    case GraphFamily::gnp:
      if (!params.seed) throw std::invalid_argument("gnp: a seed is required");
      return make_gnp(params.n, params.p, *params.seed);
    case GraphFamily::lollipop: return make_lollipop(params.n, params.tail);
  }
  throw std::invalid_argument("generate: unknown family");
}

RenitentGraph generate_renitent(const Graph& base, NodeId hub, std::uint32_t ell) {
  require_connected(base, "generate_renitent");
  const std::size_t nb = base.node_count();
  if (hub >= nb) throw std::invalid_argument("generate_renitent: hub out of range");
  if (ell < 1) throw std::invalid_argument("generate_renitent: ell must be >= 1");
  const std::uint32_t d = diameter(base);
  if (ell < d) {
    throw std::invalid_argument("generate_renitent: ell = " + std::to_string(ell) +
                                " is below the base diameter " + std::to_string(d));
  }

  const std::size_t internal = 2 * static_cast<std::size_t>(ell) - 1;
  const std::size_t n = 4 * nb + 4 * internal;
  auto copy_node = [&](std::size_t c, NodeId v) { return static_cast<NodeId>(c * nb + v); };
  auto path_node = [&](std::size_t c, std::size_t j) {
    return static_cast<NodeId>(4 * nb + c * internal + j);
  };

  std::vector<Edge> edges;
  edges.reserve(4 * base.edge_count() + 8 * ell);
  for (std::size_t c = 0; c < 4; ++c) {
    for (const auto& e : base.edges()) edges.push_back({copy_node(c, e.u), copy_node(c, e.v)});
    NodeId prev = copy_node(c, hub);
    for (std::size_t j = 0; j < internal; ++j) {
      edges.push_back({prev, path_node(c, j)});
      prev = path_node(c, j);
    }
    edges.push_back({prev, copy_node((c + 1) % 4, hub)});
  }

  RenitentGraph out{Graph(n, std::move(edges)), Cover{}};
  out.graph.set_family("renitent");

  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<NodeId> set;
    for (NodeId v = 0; v < nb; ++v) set.push_back(copy_node(c, v));
    for (std::size_t j = 0; j < internal; ++j) set.push_back(path_node(c, j));
    out.cover.sets.push_back(std::move(set));
  }
  out.cover.radius = ell;
  out.cover.disjoint_pair = {0, 2};
  out.cover.certificates = rotation_certificates(n, 4, [&](NodeId v) -> NodeId {
    if (v < 4 * nb) return static_cast<NodeId>((v + nb) % (4 * nb));
    const std::size_t offset = v - 4 * nb;
    return static_cast<NodeId>(4 * nb + (offset + internal) % (4 * internal));
  });
  return out;
}

TargetTimeGraph generate_target_time(std::size_t N, const std::function<double(double)>& target,
                                     TargetRegime regime) {
  require_nodes(N, 2, "generate_target_time");
  const double nd = static_cast<double>(N);
  const double log_n = std::log2(nd);
  const double t = target(nd);
  if (!(t >= nd * log_n && t <= nd * nd * nd)) {
    throw std::invalid_argument("generate_target_time: T(N) = " + std::to_string(t) +
                                " outside [N log2 N, N^3]");
  }

  TargetTimeGraph out;
  out.target = t;
  if (regime == TargetRegime::dense) {
    out.base = make_clique(N);
    out.ell = static_cast<std::uint32_t>(std::ceil(t / (nd * nd)));
  } else {
    out.ell = static_cast<std::uint32_t>(std::ceil(log_n + t / (nd * log_n)));
    const auto extra = static_cast<std::size_t>(std::ceil(t / out.ell));
    const std::size_t star_edges = N - 1;
    if (star_edges + extra > N * (N - 1) / 2) {
      throw std::invalid_argument("generate_target_time: " + std::to_string(extra) +
                                  " extra edges do not fit in a simple graph on " +
                                  std::to_string(N) + " nodes");
    }
    std::vector<Edge> edges;
    for (NodeId v = 1; v < N; ++v) edges.push_back({0, v});
    std::size_t added = 0;
    for (NodeId u = 1; u < N && added < extra; ++u)
      for (NodeId v = u + 1; v < N && added < extra; ++v, ++added) edges.push_back({u, v});
    out.base = Graph(N, std::move(edges));
    out.base.set_family("star+");
  }
  out.ell = std::max<std::uint32_t>(out.ell, diameter(out.base));
  out.renitent = generate_renitent(out.base, 0, out.ell);
  return out;
}

}  // namespace popsim
