#pragma once

#include <cstdint>
#include <vector>

#include "popsim/graph.hpp"
#include "popsim/rng.hpp"
#include "popsim/stats.hpp"

namespace popsim {

/// Distribution of K, the number of fair coin flips until h consecutive
/// heads: f[k] = Pr[K >= k] for k = 0..k_max.
struct StreakDistribution {
  unsigned h = 1;
  std::vector<double> f;
  /// sum_{k=1}^{k_max} f[k]
  double expected_K = 0.0;
  /// Upper bound on sum_{k > k_max} f[k].
  double tail_bound = 0.0;
};

/// f[k] = 1 for k <= h, f[h+1] = 1 - 2^-h and
/// f[k+1] = f[k] - f[k-h] / 2^{h+1} for k >= h+1.
/// Requires 1 <= h <= 24 and k_max >= h + 1.
StreakDistribution streak_survival(unsigned h, std::size_t k_max);

/// Same distribution computed by counting flip strings without a run of h
/// heads in exact integer arithmetic, rounded to double at the end.
/// Requires 1 <= h <= 8.
StreakDistribution streak_survival_exact(unsigned h, std::size_t k_max);

/// Checks the recurrence for k_max terms in exact rational arithmetic
/// against the string count. Requires 1 <= h <= 8.
bool streak_recurrence_exact(unsigned h, std::size_t k_max);

/// 2^{h+1} - 2.
double expected_streak_interactions(unsigned h);

struct StreakExpectationCheck {
  double closed_form = 0.0;
  double recurrence_sum = 0.0;
  double tail_bound = 0.0;
  double relative_error = 0.0;
};

/// Sums the recurrence until the tail bound drops below 1e-9 relative and
/// compares with the closed form.
StreakExpectationCheck check_streak_expectation(unsigned h);

/// Flips fair coins until h heads in a row; returns the number of flips.
std::uint64_t sample_K(unsigned h, Rng& rng);

struct StreakSteps {
  SampleStats R;  ///< interactions of the node itself
  SampleStats S;  ///< scheduler steps
};

/// Runs the scheduler until `node` completes `ell` streaks of length h,
/// counting a step toward the streak when the node is the initiator and
/// resetting it when the node is the responder. Trial i uses
/// derive_seed(master_seed, i).
StreakSteps measure_streak_steps(const Graph& g, NodeId node, unsigned h, std::size_t ell,
                                 std::size_t trials, std::uint64_t master_seed, unsigned threads = 1);

}  // namespace popsim
