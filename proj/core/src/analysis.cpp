#include "popsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "popsim/engine.hpp"

namespace popsim {

double c_lambda(double lambda) { return lambda - 1.0 - std::log(lambda); }

double lambda0() {
  static const double value = [] {
    auto gap = [](double x) { return x - std::numbers::e - std::log(x) - x / 2.0; };
    double lo = 2.0, hi = 4.0;
    while (gap(hi) < 0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
      const double mid = 0.5 * (lo + hi);
      (gap(mid) >= 0 ? hi : lo) = mid;
    }
    return hi;
  }();
  return value;
}

BoundReport broadcast_bounds(const GraphMetrics& metrics) {
  if (metrics.n < 2 || metrics.m == 0 || metrics.max_degree == 0) {
    throw std::invalid_argument("broadcast_bounds: need a graph with at least one edge");
  }
  const auto n = static_cast<double>(metrics.n);
  const auto m = static_cast<double>(metrics.m);
  BoundReport r;
  r.lambda0 = lambda0();
  r.lower = m / static_cast<double>(metrics.max_degree) * std::log(n - 1.0);
  r.upper_diam = m * std::max(6.0 * std::log(n), static_cast<double>(metrics.diameter)) + 2.0;
  if (metrics.edge_expansion && metrics.edge_expansion->num > 0) {
    r.upper_expansion = 2.0 * r.lambda0 * m * std::log2(n) / metrics.edge_expansion->value() + 2.0;
  }
  return r;
}

namespace {

bool iso_certificate_ok(const Graph& g, const Cover& cover, const IsoCertificate& cert) {
  const std::size_t n = g.node_count();
  if (cert.from >= cover.size() || cert.to >= cover.size() || cert.image.size() != n) return false;
  const auto& src_set = cover.sets[cert.from];
  const auto& dst_set = cover.sets[cert.to];
  const auto src_ball = ball(g, std::span<const NodeId>(src_set), cover.radius);
  const auto dst_ball = ball(g, std::span<const NodeId>(dst_set), cover.radius);
  if (src_ball.size() != dst_ball.size()) return false;

  // Bijection of the balls.
  std::vector<std::uint8_t> in_dst(n, 0), hit(n, 0);
  for (NodeId v : dst_ball) in_dst[v] = 1;
  std::vector<std::uint8_t> in_src(n, 0);
  for (NodeId v : src_ball) in_src[v] = 1;
  for (NodeId v : src_ball) {
    const NodeId w = cert.image[v];
    if (w >= n || !in_dst[w] || hit[w]) return false;
    hit[w] = 1;
  }
  // V_i onto V_j.
  std::vector<NodeId> mapped;
  for (NodeId v : src_set) mapped.push_back(cert.image[v]);
  std::sort(mapped.begin(), mapped.end());
  if (mapped != dst_set) return false;
  // Induced edges are preserved in both directions; with equal edge counts
  // the forward direction suffices.
  std::size_t src_edges = 0, dst_edges = 0;
  for (NodeId v : src_ball) {
    for (NodeId u : g.neighbors(v)) {
      if (u > v && in_src[u]) {
        ++src_edges;
        if (!g.has_edge(cert.image[v], cert.image[u])) return false;
      }
    }
  }
  for (NodeId v : dst_ball) {
    for (NodeId u : g.neighbors(v)) dst_edges += (u > v && in_dst[u]);
  }
  return src_edges == dst_edges;
}

}  // namespace

CoverReport verify_cover(const Graph& g, const Cover& cover) {
  const std::size_t n = g.node_count();
  const std::size_t k = cover.size();
  if (k > 1 && cover.certificates.empty()) {
    throw std::invalid_argument("verify_cover: the cover carries no isomorphism certificates");
  }
  CoverReport r;

  std::vector<std::uint8_t> covered(n, 0);
  bool in_range = true;
  for (const auto& set : cover.sets) {
    for (NodeId v : set) {
      if (v >= n) {
        in_range = false;
      } else {
        covered[v] = 1;
      }
    }
  }
  r.union_ok = in_range && k > 0 && std::all_of(covered.begin(), covered.end(), [](auto c) { return c != 0; });

  r.sizes_ok = k > 0 && std::all_of(cover.sets.begin(), cover.sets.end(),
                                    [&](const auto& s) { return s.size() == cover.sets.front().size() && !s.empty(); });

  if (in_range) {
    // Certificates must all check and connect the sets.
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool all_ok = true;
    for (const auto& cert : cover.certificates) {
      if (!iso_certificate_ok(g, cover, cert)) {
        all_ok = false;
        break;
      }
      parent[find(cert.from)] = find(cert.to);
    }
    bool connected = true;
    for (std::size_t i = 1; i < k; ++i) connected = connected && find(i) == find(0);
    r.iso_ok = all_ok && connected;

    const auto [i, j] = cover.disjoint_pair;
    if (i < k && j < k && i != j) {
      const auto bi = ball(g, std::span<const NodeId>(cover.sets[i]), cover.radius);
      const auto bj = ball(g, std::span<const NodeId>(cover.sets[j]), cover.radius);
      std::vector<NodeId> common;
      std::set_intersection(bi.begin(), bi.end(), bj.begin(), bj.end(), std::back_inserter(common));
      r.disjoint_ok = common.empty();
    }
  }
  return r;
}

namespace {

struct IsolationMasks {
  std::vector<std::uint64_t> member;   ///< bit i: v in V_i
  std::vector<std::uint64_t> outside;  ///< bit i: v outside the ball of V_i
  bool escapable = false;
};

IsolationMasks isolation_masks(const Graph& g, const Cover& cover) {
  if (cover.size() == 0 || cover.size() > 64) {
    throw std::invalid_argument("isolation_time: cover must have between 1 and 64 sets");
  }
  const std::size_t n = g.node_count();
  IsolationMasks masks{std::vector<std::uint64_t>(n, 0), std::vector<std::uint64_t>(n, 0)};
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (NodeId v : cover.sets[i]) masks.member.at(v) |= bit;
    std::vector<std::uint8_t> inside(n, 0);
    for (NodeId v : ball(g, std::span<const NodeId>(cover.sets[i]), cover.radius)) inside[v] = 1;
    for (NodeId v = 0; v < n; ++v) {
      if (!inside[v]) {
        masks.outside[v] |= bit;
        masks.escapable = true;
      }
    }
  }
  return masks;
}

std::uint64_t run_isolation(const Graph& g, const IsolationMasks& masks, Rng& rng, std::uint64_t t_cap) {
  // flags[v] bit i: v has been influenced by a node outside the ball of V_i.
  if (!masks.escapable) return t_cap;
  std::vector<std::uint64_t> flags = masks.outside;
  for (std::uint64_t t = 1; t <= t_cap; ++t) {
    const Interaction in = sample_interaction(g, rng);
    const std::uint64_t merged = flags[in.initiator] | flags[in.responder];
    flags[in.initiator] = flags[in.responder] = merged;
    if ((merged & (masks.member[in.initiator] | masks.member[in.responder])) != 0) return t;
  }
  return t_cap;
}

}  // namespace

std::uint64_t isolation_time(const Graph& g, const Cover& cover, Rng& rng, std::uint64_t t_cap) {
  return run_isolation(g, isolation_masks(g, cover), rng, t_cap);
}

IsolationEstimate isolation_probability(const Graph& g, const Cover& cover, std::uint64_t t,
                                        std::size_t trials, std::uint64_t master_seed, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("isolation_probability: need at least one trial");
  const IsolationMasks masks = isolation_masks(g, cover);
  std::vector<std::uint8_t> isolated(trials, 0);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng(derive_seed(master_seed, i));
    isolated[i] = run_isolation(g, masks, rng, t) >= t;
  });
  IsolationEstimate e;
  e.trials = trials;
  e.isolated = static_cast<std::size_t>(std::count(isolated.begin(), isolated.end(), 1));
  e.fraction = static_cast<double>(e.isolated) / static_cast<double>(trials);
  e.wilson = wilson_interval(e.isolated, trials);
  return e;
}

IsolationCalibration calibrate_isolation(const Graph& g, const Cover& cover, std::size_t pilot_trials,
                                         std::uint64_t pilot_seed, double fraction, unsigned threads) {
  if (pilot_trials < 1) throw std::invalid_argument("calibrate_isolation: need at least one pilot trial");
  const IsolationMasks masks = isolation_masks(g, cover);
  const double scale = static_cast<double>(cover.radius) * static_cast<double>(g.edge_count());
  if (!(scale > 0)) throw std::invalid_argument("calibrate_isolation: radius and m must be positive");
  std::vector<double> ratios(pilot_trials);
  const std::uint64_t cap = std::numeric_limits<std::uint32_t>::max();
  parallel_for(pilot_trials, threads, [&](std::size_t i) {
    Rng rng(derive_seed(pilot_seed, i));
    ratios[i] = static_cast<double>(run_isolation(g, masks, rng, cap)) / scale;
  });
  std::sort(ratios.begin(), ratios.end());
  IsolationCalibration c;
  c.pilot_trials = pilot_trials;
  c.pilot_median = sorted_quantile(ratios, 0.5);
  c.lambda = fraction * c.pilot_median;
  return c;
}

}  // namespace popsim
