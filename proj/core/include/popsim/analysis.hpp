#pragma once

#include <cstdint>
#include <optional>

#include "popsim/cover.hpp"
#include "popsim/graph.hpp"
#include "popsim/metrics.hpp"
#include "popsim/rng.hpp"
#include "popsim/stats.hpp"

namespace popsim {

/// c(lambda) = lambda - 1 - ln(lambda).
double c_lambda(double lambda);

/// Least lambda >= 2 with lambda - e - ln(lambda) >= lambda / 2, by bisection.
double lambda0();

struct BoundReport {
  double lower = 0.0;                     ///< m / max_degree * ln(n - 1)
  double upper_diam = 0.0;                ///< m * max(6 ln n, D) + 2
  std::optional<double> upper_expansion;  ///< 2 lambda0 m log2(n) / beta + 2
  double lambda0 = 0.0;

  double min_upper() const noexcept {
    return upper_expansion ? std::min(upper_diam, *upper_expansion) : upper_diam;
  }
};

/// Bounds on the worst-case expected broadcast time. Requires n >= 2.
BoundReport broadcast_bounds(const GraphMetrics& metrics);

struct CoverReport {
  bool union_ok = false;
  bool sizes_ok = false;
  bool iso_ok = false;
  bool disjoint_ok = false;

  bool ok() const noexcept { return union_ok && sizes_ok && iso_ok && disjoint_ok; }
};

/// Checks that the sets cover V, have equal sizes, that every certificate
/// is an isomorphism of the induced radius-l ball subgraphs mapping V_i onto
/// V_j and that the certificates connect all sets, and that the two balls of
/// the disjoint pair do not meet. Throws std::invalid_argument when a cover
/// with more than one set has no certificates.
CoverReport verify_cover(const Graph& g, const Cover& cover);

/// First step at which some cover set is influenced by a node outside its
/// radius-l ball; t_cap if that has not happened after t_cap steps.
/// At most 64 sets.
std::uint64_t isolation_time(const Graph& g, const Cover& cover, Rng& rng, std::uint64_t t_cap);

struct IsolationEstimate {
  std::size_t trials = 0;
  std::size_t isolated = 0;  ///< trials with Y >= t
  double fraction = 0.0;
  Interval wilson;
};

/// Monte Carlo estimate of Pr[Y >= t]; trial i uses derive_seed(master_seed, i).
IsolationEstimate isolation_probability(const Graph& g, const Cover& cover, std::uint64_t t,
                                        std::size_t trials, std::uint64_t master_seed,
                                        unsigned threads = 1);

struct IsolationCalibration {
  double lambda = 0.0;
  double pilot_median = 0.0;  ///< median of Y / (l m) over the pilot
  std::size_t pilot_trials = 0;
};

/// lambda = fraction * median(Y / (l m)) over pilot runs on seeds derived
/// from `pilot_seed`.
IsolationCalibration calibrate_isolation(const Graph& g, const Cover& cover, std::size_t pilot_trials,
                                         std::uint64_t pilot_seed, double fraction = 0.5,
                                         unsigned threads = 1);

}  // namespace popsim
