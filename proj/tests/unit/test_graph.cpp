#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "qgraph/error.hpp"
#include "qgraph/graph.hpp"

using namespace qgraph;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected qgraph::Error";
  return Errc::internal_consistency;
}

}  // namespace

TEST(CompleteGraph, SingleEdge) {
  const Graph g = build_complete_graph(2);
  EXPECT_EQ(g.bond_count(), 1);
  EXPECT_EQ(g.degree(0), 1);
  EXPECT_EQ(g.degree(1), 1);
}

TEST(CompleteGraph, BondCountsAndDegrees) {
  EXPECT_EQ(build_complete_graph(4).bond_count(), 6);
  EXPECT_EQ(DirectedBondSpace(build_complete_graph(4)).size(), 12);
  const Graph g = build_complete_graph(5);
  EXPECT_EQ(g.bond_count(), 10);
  for (int v = 0; v < 5; ++v) EXPECT_EQ(g.degree(v), 4);
  EXPECT_TRUE(g.is_connected());
}

TEST(CompleteGraph, RejectsTooFewVertices) {
  EXPECT_EQ(code_of([] { build_complete_graph(1); }), Errc::invalid_argument);
}

TEST(GraphValidation, RejectsLoopsMultiEdgesAndDisconnected) {
  EXPECT_THROW(Graph(3, {{0, 0}, {0, 1}, {1, 2}}), Error);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}, {1, 2}}), Error);
  EXPECT_THROW(Graph(4, {{0, 1}, {2, 3}}), Error);
}

TEST(RandomRegular, EdgeCountFromDegree) {
  const Graph g = build_random_regular(8, 3, 1);
  EXPECT_EQ(g.bond_count(), 12);
  for (int v = 0; v < 8; ++v) EXPECT_EQ(g.degree(v), 3);
  EXPECT_TRUE(g.is_connected());
}

TEST(RandomRegular, FullDegreeIsComplete) {
  const Graph g = build_random_regular(6, 5, 3);
  EXPECT_EQ(g.bond_count(), 15);
  std::set<std::pair<int, int>> edges;
  for (auto [a, b] : g.edges()) edges.insert({std::min(a, b), std::max(a, b)});
  EXPECT_EQ(edges.size(), 15u);
}

TEST(RandomRegular, OddProductRejected) {
  EXPECT_EQ(code_of([] { build_random_regular(5, 3, 1); }), Errc::invalid_argument);
}

TEST(RandomRegular, DeterministicGivenSeed) {
  EXPECT_EQ(build_random_regular(12, 3, 42).edges(), build_random_regular(12, 3, 42).edges());
}

TEST(RandomRegular, ExhaustedBudgetIsConstructionFailure) {
  // (V-2)-regular graphs on 8 vertices: sequential pairing dead-ends on a
  // majority of single attempts.
  RandomRegularOptions opts;
  opts.attempt_budget = 1;
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    try {
      build_random_regular(8, 6, seed, opts);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::construction_failure);
      ++failures;
    }
  }
  EXPECT_GT(failures, 0);
  // A generous budget always succeeds.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) EXPECT_EQ(build_random_regular(8, 6, seed).vertex_count(), 8);
}

TEST(BondLengths, RangeAndDeterminism) {
  const BondLengths a = sample_bond_lengths(3, 1.0, 2.0, 7);
  ASSERT_EQ(a.size(), 3);
  for (double l : a.values) {
    EXPECT_GE(l, 1.0);
    EXPECT_LE(l, 2.0);
  }
  EXPECT_EQ(a.values, sample_bond_lengths(3, 1.0, 2.0, 7).values);
  const BondLengths b = sample_bond_lengths(1, 1.0, 1.0 + 1e-9, 3);
  EXPECT_NEAR(b.values[0], 1.0, 1e-8);
}

TEST(BondLengths, RejectsBadInterval) {
  EXPECT_EQ(code_of([] { sample_bond_lengths(3, 0.0, 1.0, 1); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([] { sample_bond_lengths(3, 2.0, 1.0, 1); }), Errc::invalid_argument);
}

TEST(DirectedBonds, LayoutMatchesIndexFormula) {
  EXPECT_EQ(DirectedBondSpace::index(0, Direction::forward), 0);
  EXPECT_EQ(DirectedBondSpace::index(0, Direction::backward), 1);
  EXPECT_EQ(DirectedBondSpace::index(3, Direction::backward), 7);
  EXPECT_EQ(DirectedBondSpace::bond(7), 3);
  EXPECT_EQ(DirectedBondSpace::direction(7), Direction::backward);
}

// Property: flip is a fixed-point-free involution and reverses endpoints.
TEST(DirectedBondsProperty, FlipReversesEndpoints) {
  for (const auto& c : qgraph::testing::graph_cases(11)) {
    const DirectedBondSpace space(c.graph);
    ASSERT_EQ(space.size(), 2 * c.graph.bond_count()) << c.label;
    for (int mu = 0; mu < space.size(); ++mu) {
      const int f = DirectedBondSpace::flip(mu);
      EXPECT_NE(f, mu);
      EXPECT_EQ(DirectedBondSpace::flip(f), mu);
      EXPECT_EQ(space.terminus(mu), space.origin(f)) << c.label;
      EXPECT_EQ(space.origin(mu), space.terminus(f)) << c.label;
    }
    EXPECT_TRUE(c.graph.is_connected()) << c.label;
  }
}
