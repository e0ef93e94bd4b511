#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "popsim/graph.hpp"

namespace popsim {

/// Claimed isomorphism between the radius-l neighbourhoods of two cover sets.
/// `image` has one entry per graph node; only entries for nodes in the ball
/// around sets[from] are meaningful.
struct IsoCertificate {
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<NodeId> image;
};

/// A family of K node subsets with a common radius, used for isolation-time
/// experiments. Sets are sorted; certificates cover every pair from < to.
struct Cover {
  std::vector<std::vector<NodeId>> sets;
  std::uint32_t radius = 0;
  std::vector<IsoCertificate> certificates;
  std::pair<std::size_t, std::size_t> disjoint_pair{0, 0};

  std::size_t size() const noexcept { return sets.size(); }
};

enum class CycleCoverMode {
  paper,          ///< radius ceil(n/4)
  disjoint_safe,  ///< radius small enough that opposite arcs have disjoint balls
};

/// Four consecutive arcs of length ceil(n/4) on a cycle, with rotation
/// certificates and disjoint pair (0, 2). Requires a cycle with n >= 16.
Cover cycle_cover(const Graph& g, CycleCoverMode mode = CycleCoverMode::disjoint_safe);

/// Certificates induced by a graph automorphism of order K that maps set i
/// onto set (i + 1) mod K. `rotate(v)` applies the automorphism once.
template <class Rotation>
std::vector<IsoCertificate> rotation_certificates(std::size_t node_count, std::size_t k,
                                                  Rotation rotate) {
  std::vector<IsoCertificate> out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      IsoCertificate cert{i, j, std::vector<NodeId>(node_count)};
      for (NodeId v = 0; v < node_count; ++v) {
        NodeId w = v;
        for (std::size_t step = 0; step < j - i; ++step) w = rotate(w);
        cert.image[v] = w;
      }
      out.push_back(std::move(cert));
    }
  }
  return out;
}

}  // namespace popsim
