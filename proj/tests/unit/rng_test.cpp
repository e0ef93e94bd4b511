#include "popsim/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "popsim/stats.hpp"

namespace popsim {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DifferentSeedsDiverge) {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next() == b.next();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, ReseedRestartsStream) {
  Rng a(7);
  const auto first = a.next();
  a.next();
  a.reseed(7);
  EXPECT_EQ(a.next(), first);
  EXPECT_EQ(a.seed(), 7u);
}

// Reference values of the splitmix64 output sequence seeded with 0.
TEST(Rng, Mix64KnownValues) {
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(mix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, DeriveSeedInjectiveOnPrefix) {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 200000; ++i) ASSERT_TRUE(seen.insert(derive_seed(123, i)).second);
}

TEST(Rng, DeriveSeedDependsOnMaster) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(5);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int i = 0; i < 2000; ++i) ASSERT_LT(rng.below(bound), bound);
  }
}

TEST(Rng, BelowIsUniform) {
  Rng rng(9);
  std::vector<std::size_t> counts(10, 0);
  for (int i = 0; i < 200000; ++i) ++counts[rng.below(10)];
  EXPECT_LT(chi_square_uniform(counts), chi_square_critical(9, 0.001));
}

TEST(Rng, UnitInHalfOpenInterval) {
  Rng rng(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, CoinIsFair) {
  Rng rng(11);
  int heads = 0;
  for (int i = 0; i < 100000; ++i) heads += rng.coin();
  EXPECT_NEAR(heads / 100000.0, 0.5, 0.005);
}

TEST(Stats, SummarizeKnownSample) {
  const std::vector<double> v{4, 1, 3, 2, 5};
  const auto s = summarize(v);
  EXPECT_EQ(s.count, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 5.0);
  EXPECT_NEAR(s.stddev, std::sqrt(2.5), 1e-12);
  EXPECT_DOUBLE_EQ(s.q25, 2.0);
}

TEST(Stats, WilsonIntervalContainsEstimate) {
  const auto w = wilson_interval(60, 100);
  EXPECT_LT(w.lo, 0.6);
  EXPECT_GT(w.hi, 0.6);
  EXPECT_NEAR(w.lo, 0.502, 0.001);
  const auto all = wilson_interval(100, 100);
  EXPECT_DOUBLE_EQ(all.hi, 1.0);
}

TEST(Stats, ChiSquareCriticalValues) {
  EXPECT_NEAR(chi_square_critical(1, 0.05), 3.841, 1e-3);
  EXPECT_NEAR(chi_square_critical(19, 0.001), 43.820, 1e-3);
}

}  // namespace
}  // namespace popsim
