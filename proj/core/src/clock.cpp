#include "popsim/clock.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "popsim/engine.hpp"

namespace popsim {

namespace mp = boost::multiprecision;

namespace {

void require_h(unsigned h, unsigned limit) {
  if (h < 1 || h > limit) {
    throw std::invalid_argument("streak length h must be in 1.." + std::to_string(limit));
  }
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) noexcept {
    const double t = sum + x;
    carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

double tail_after(unsigned h, std::size_t k_max) {
  const double q = std::ldexp(1.0, -static_cast<int>(h) - 1);
  return std::pow(1.0 - q, static_cast<double>(k_max + 1 - h)) / q;
}

// counts[k] = number of length-k flip strings with no run of h heads, k = 0..len.
std::vector<mp::cpp_int> run_free_counts(unsigned h, std::size_t len) {
  // by_run[j]: strings ending in exactly j trailing heads.
  std::vector<mp::cpp_int> by_run(h, 0), next(h, 0);
  by_run[0] = 1;
  std::vector<mp::cpp_int> counts;
  counts.reserve(len + 1);
  counts.emplace_back(1);
  for (std::size_t k = 1; k <= len; ++k) {
    mp::cpp_int total = 0;
    for (const auto& c : by_run) total += c;
    next[0] = total;
    for (unsigned j = 1; j < h; ++j) next[j] = by_run[j - 1];
    std::swap(by_run, next);
    total = 0;
    for (const auto& c : by_run) total += c;
    counts.push_back(total);
  }
  return counts;
}

}  // namespace

StreakDistribution streak_survival(unsigned h, std::size_t k_max) {
  require_h(h, 24);
  if (k_max < h + 1) throw std::invalid_argument("streak_survival: k_max must be at least h + 1");
  StreakDistribution d;
  d.h = h;
  d.f.assign(k_max + 1, 1.0);
  d.f[h + 1] = 1.0 - std::ldexp(1.0, -static_cast<int>(h));
  const double scale = std::ldexp(1.0, -static_cast<int>(h) - 1);
  for (std::size_t k = h + 1; k < k_max; ++k) d.f[k + 1] = d.f[k] - d.f[k - h] * scale;
  CompensatedSum sum;
  for (std::size_t k = 1; k <= k_max; ++k) sum.add(d.f[k]);
  d.expected_K = sum.value();
  d.tail_bound = tail_after(h, k_max);
  return d;
}

StreakDistribution streak_survival_exact(unsigned h, std::size_t k_max) {
  require_h(h, 8);
  if (k_max < h + 1) throw std::invalid_argument("streak_survival_exact: k_max must be at least h + 1");
  const auto counts = run_free_counts(h, k_max);
  StreakDistribution d;
  d.h = h;
  d.f.assign(k_max + 1, 1.0);
  mp::cpp_rational sum = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const mp::cpp_rational value(counts[k - 1], mp::cpp_int(1) << (k - 1));
    d.f[k] = static_cast<double>(value);
    sum += value;
  }
  d.expected_K = static_cast<double>(sum);
  d.tail_bound = tail_after(h, k_max);
  return d;
}

bool streak_recurrence_exact(unsigned h, std::size_t k_max) {
  require_h(h, 8);
  if (k_max < h + 1) return false;
  const auto counts = run_free_counts(h, k_max);
  std::vector<mp::cpp_rational> f(k_max + 1, 1);
  for (std::size_t k = 1; k <= k_max; ++k) f[k] = mp::cpp_rational(counts[k - 1], mp::cpp_int(1) << (k - 1));
  for (std::size_t k = 0; k <= h; ++k) {
    if (f[k] != 1) return false;
  }
  const mp::cpp_int pow_h = mp::cpp_int(1) << h;
  if (f[h + 1] != mp::cpp_rational(pow_h - 1, pow_h)) return false;
  const mp::cpp_rational scale(1, mp::cpp_int(1) << (h + 1));
  for (std::size_t k = h + 1; k < k_max; ++k) {
    if (f[k + 1] != f[k] - f[k - h] * scale) return false;
  }
  return true;
}

double expected_streak_interactions(unsigned h) {
  require_h(h, 24);
  return std::ldexp(1.0, static_cast<int>(h) + 1) - 2.0;
}

StreakExpectationCheck check_streak_expectation(unsigned h) {
  require_h(h, 24);
  StreakExpectationCheck out;
  out.closed_form = expected_streak_interactions(h);

  // Ring buffer over the last h + 1 values of f.
  const std::size_t width = h + 1;
  std::vector<double> ring(width, 1.0);
  const double scale = std::ldexp(1.0, -static_cast<int>(h) - 1);
  CompensatedSum sum;
  for (std::size_t k = 1; k <= h; ++k) sum.add(1.0);
  double fk = 1.0 - std::ldexp(1.0, -static_cast<int>(h));  // f[h+1]
  ring[(h + 1) % width] = fk;
  std::size_t k = h + 1;
  sum.add(fk);
  const double target = 1e-9 * out.closed_form;
  for (;;) {
    if (k % 1024 == 0) {
      const double tail = tail_after(h, k);
      if (tail < target) {
        out.tail_bound = tail;
        break;
      }
    }
    // f[k+1] = f[k] - f[k-h] * scale; slot (k+1) % width held f[k-h].
    fk -= ring[(k + 1) % width] * scale;
    ++k;
    ring[k % width] = fk;
    sum.add(fk);
  }
  out.recurrence_sum = sum.value();
  out.relative_error = std::fabs(out.recurrence_sum - out.closed_form) / out.closed_form;
  return out;
}

std::uint64_t sample_K(unsigned h, Rng& rng) {
  std::uint64_t flips = 0;
  unsigned run = 0;
  while (run < h) {
    ++flips;
    run = rng.coin() ? run + 1 : 0;
  }
  return flips;
}

StreakSteps measure_streak_steps(const Graph& g, NodeId node, unsigned h, std::size_t ell,
                                 std::size_t trials, std::uint64_t master_seed, unsigned threads) {
  if (node >= g.node_count()) throw std::out_of_range("measure_streak_steps: node out of range");
  if (h < 1 || ell < 1 || trials < 1) {
    throw std::invalid_argument("measure_streak_steps: h, ell and trials must be positive");
  }
  if (g.degree(node) == 0) throw std::invalid_argument("measure_streak_steps: node is isolated");
  std::vector<double> r_values(trials), s_values(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng(derive_seed(master_seed, i));
    std::uint64_t steps = 0, own = 0;
    std::size_t completed = 0;
    unsigned streak = 0;
    while (completed < ell) {
      const Interaction in = sample_interaction(g, rng);
      ++steps;
      if (in.initiator == node) {
        ++own;
        if (++streak == h) {
          streak = 0;
          ++completed;
        }
      } else if (in.responder == node) {
        ++own;
        streak = 0;
      }
    }
    r_values[i] = static_cast<double>(own);
    s_values[i] = static_cast<double>(steps);
  });
  return {summarize(r_values), summarize(s_values)};
}

}  // namespace popsim
