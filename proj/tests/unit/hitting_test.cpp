#include <gtest/gtest.h>

#include "popsim/generators.hpp"
#include "popsim/hitting.hpp"

namespace popsim {
namespace {

TEST(ClassicHitting, CliqueIsNMinusOne) {
  for (std::size_t n = 3; n <= 50; ++n) {
    const auto s = classic_hitting_exact(make_clique(n), 0);
    EXPECT_EQ(s.times[0], 0.0);
    for (NodeId u = 1; u < n; ++u) EXPECT_NEAR(s.times[u], static_cast<double>(n - 1), 1e-9) << n;
    EXPECT_LT(s.residual, 1e-9);
  }
}

TEST(ClassicHitting, CycleIsKTimesNMinusK) {
  for (std::size_t n : {4u, 6u, 9u, 30u}) {
    const auto s = classic_hitting_exact(make_cycle(n), 0);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(s.times[k], static_cast<double>(k * (n - k)), 1e-8) << n;
  }
  EXPECT_NEAR(classic_hitting_exact(make_cycle(4), 2).times[0], 4.0, 1e-12);
}

TEST(ClassicHitting, PathFromEnd) {
  // From one end of path(n) to the other takes (n - 1)^2 steps.
  const auto s = classic_hitting_exact(make_path(7), 6);
  EXPECT_NEAR(s.times[0], 36.0, 1e-9);
}

TEST(ClassicHitting, StarLeafToLeaf) {
  // Leaf -> centre is 1 step; from the centre a leaf is found after n - 1 tries of 2 steps each, minus one.
  const std::size_t n = 9;
  const auto s = classic_hitting_exact(make_star(n), 1);
  EXPECT_NEAR(s.times[0], 2.0 * (n - 1) - 1, 1e-9);
  EXPECT_NEAR(s.times[2], 2.0 * (n - 1), 1e-9);
}

TEST(ClassicHitting, Worst) {
  EXPECT_NEAR(classic_hitting_worst(make_clique(10)), 9.0, 1e-9);
  EXPECT_NEAR(classic_hitting_worst(make_clique(2)), 1.0, 1e-12);
  EXPECT_NEAR(classic_hitting_worst(make_cycle(6)), 9.0, 1e-9);
}

TEST(ClassicHitting, RejectsBadInput) {
  EXPECT_THROW(classic_hitting_exact(Graph(3, {{0, 1}}), 0), std::invalid_argument);
  EXPECT_THROW(classic_hitting_exact(make_cycle(5), 7), std::out_of_range);
}

TEST(PopulationHitting, ScalesClassicOnRegularGraphs) {
  // On a d-regular graph the walk moves with probability d / m per step.
  const Graph g = make_torus({3, 5});
  const auto c = classic_hitting_exact(g, 4);
  const auto p = population_hitting_exact(g, 4);
  const double scale = static_cast<double>(g.edge_count()) / 4.0;
  for (NodeId u = 0; u < g.node_count(); ++u) EXPECT_NEAR(p.times[u], scale * c.times[u], 1e-7);
}

TEST(PopulationHitting, StarLeafToLeaf) {
  // Leaf waits m steps for its edge; the centre waits 1 step per move.
  const std::size_t n = 6;
  const auto p = population_hitting_exact(make_star(n), 1);
  const double m = n - 1;
  // H(c) = 1 + (n - 2)/(n - 1) * (m + H(c)) gives H(c) = (1 + (n-2)m/(n-1)) (n-1).
  const double hc = (1 + (n - 2) * m / (n - 1)) * (n - 1);
  EXPECT_NEAR(p.times[0], hc, 1e-9);
  EXPECT_NEAR(p.times[2], m + hc, 1e-9);
}

TEST(HittingTable, Entries) {
  const Graph g = make_lollipop(5, 3);
  const auto t = classic_hitting_table(g);
  EXPECT_EQ(t.n, 8u);
  for (NodeId u = 0; u < 8; ++u) {
    EXPECT_EQ(t.at(u, u), 0.0);
    for (NodeId v = 0; v < 8; ++v) EXPECT_GE(t.at(u, v), 0.0);
  }
  EXPECT_LT(t.max_residual, 1e-9);
  EXPECT_DOUBLE_EQ(t.worst, t.at(t.worst_pair.first, t.worst_pair.second));
  EXPECT_DOUBLE_EQ(t.worst, classic_hitting_worst(g));
  // Reaching the end of the tail from inside the clique is slowest.
  EXPECT_EQ(t.worst_pair.second, 7u);
  const auto p = population_hitting_table(g);
  EXPECT_GT(p.worst, t.worst);
}

}  // namespace
}  // namespace popsim
