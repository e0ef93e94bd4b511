#include "popsim/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace popsim {

namespace {

// Solves deg(u) x_u - sum_{w ~ u, w != target} x_w = deg(u) cost(u) for u != target.
template <class Cost>
HittingSolution solve_hitting(const Graph& g, NodeId target, Cost cost) {
  const std::size_t n = g.node_count();
  if (target >= n) throw std::out_of_range("hitting: target out of range");
  if (n > kMaxHittingNodes) {
    throw std::invalid_argument("hitting: dense solver supports at most " +
                                std::to_string(kMaxHittingNodes) + " nodes");
  }
  require_connected(g, "hitting time solver");

  HittingSolution out;
  out.target = target;
  out.times.assign(n, 0.0);
  if (n == 1) return out;

  // Row/column index of node v in the reduced system.
  auto index = [target](NodeId v) -> std::size_t { return v < target ? v : v - 1; };
  const std::size_t size = n - 1;
  std::vector<double> a(size * size, 0.0), b(size, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    if (u == target) continue;
    const std::size_t row = index(u);
    const auto deg = static_cast<double>(g.degree(u));
    a[row * size + row] = deg;
    b[row] = deg * cost(u);
    for (NodeId w : g.neighbors(u)) {
      if (w != target) a[row * size + index(w)] -= 1.0;
    }
  }
  const std::vector<double> a0 = a, b0 = b;

  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < size; ++r) {
      if (std::fabs(a[r * size + col]) > std::fabs(a[pivot * size + col])) pivot = r;
    }
    if (a[pivot * size + col] == 0.0) throw std::runtime_error("hitting: singular system");
    if (pivot != col) {
      for (std::size_t c = col; c < size; ++c) std::swap(a[col * size + c], a[pivot * size + c]);
      std::swap(b[col], b[pivot]);
    }
    const double diag = a[col * size + col];
    for (std::size_t r = col + 1; r < size; ++r) {
      const double factor = a[r * size + col] / diag;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < size; ++c) a[r * size + c] -= factor * a[col * size + c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(size);
  for (std::size_t i = size; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < size; ++c) acc -= a[i * size + c] * x[c];
    x[i] = acc / a[i * size + i];
  }

  for (std::size_t r = 0; r < size; ++r) {
    double acc = -b0[r];
    for (std::size_t c = 0; c < size; ++c) acc += a0[r * size + c] * x[c];
    // Scale back to the per-step form of the equation.
    out.residual = std::max(out.residual, std::fabs(acc) / a0[r * size + r]);
  }
  double scale = 1.0;
  for (double v : x) scale = std::max(scale, std::fabs(v));
  if (!(out.residual < 1e-9 * scale)) {
    throw std::runtime_error("hitting: residual " + std::to_string(out.residual) + " exceeds tolerance");
  }
  for (NodeId v = 0; v < n; ++v) {
    if (v != target) out.times[v] = x[index(v)];
  }
  return out;
}

template <class Solve>
HittingTable build_table(const Graph& g, Solve solve) {
  HittingTable t;
  t.n = g.node_count();
  t.values.assign(t.n * t.n, 0.0);
  for (NodeId v = 0; v < t.n; ++v) {
    const HittingSolution s = solve(v);
    t.max_residual = std::max(t.max_residual, s.residual);
    for (NodeId u = 0; u < t.n; ++u) {
      t.values[static_cast<std::size_t>(u) * t.n + v] = s.times[u];
      if (s.times[u] > t.worst) {
        t.worst = s.times[u];
        t.worst_pair = {u, v};
      }
    }
  }
  return t;
}

}  // namespace

HittingSolution classic_hitting_exact(const Graph& g, NodeId target) {
  return solve_hitting(g, target, [](NodeId) { return 1.0; });
}

HittingSolution population_hitting_exact(const Graph& g, NodeId target) {
  const auto m = static_cast<double>(g.edge_count());
  return solve_hitting(g, target, [&](NodeId x) { return m / static_cast<double>(g.degree(x)); });
}

HittingTable classic_hitting_table(const Graph& g) {
  return build_table(g, [&](NodeId v) { return classic_hitting_exact(g, v); });
}

HittingTable population_hitting_table(const Graph& g) {
  return build_table(g, [&](NodeId v) { return population_hitting_exact(g, v); });
}

double classic_hitting_worst(const Graph& g) { return classic_hitting_table(g).worst; }

}  // namespace popsim
