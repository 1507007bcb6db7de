#include <cfcm/errors.hpp>
#include <cfcm/generators.hpp>
#include <cfcm/inference.hpp>
#include <cfcm/separation.hpp>
#include <cfcm/teleportation.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cfcm;

namespace {

SeparationQuery query(const DirectedGraph& g, std::initializer_list<const char*> x, std::initializer_list<const char*> y,
                      std::initializer_list<const char*> z = {}) {
  SeparationQuery q;
  for (const char* v : x) q.x.insert(g.index_of(v));
  for (const char* v : y) q.y.insert(g.index_of(v));
  for (const char* v : z) q.z.insert(g.index_of(v));
  return q;
}

// p-separation straight from its definition: first split set whose member graph
// d-separates with every post-selection vertex added to V3, using the path oracle.
std::optional<VertexSet> p_witness_oracle(const DirectedGraph& g, const SeparationQuery& q) {
  for (const VertexSet& s : oracle::split_sets(g)) {
    const TeleportationGraph tg = build_teleportation_graph(g, s);
    const SeparationQuery lifted{q.x, q.y, q.z | tg.post_selection_vertices()};
    if (oracle::d_separated(tg.graph, lifted)) return s;
  }
  return std::nullopt;
}

// Every graph on n vertices, self-loops included, indexed by a bitmask over ordered pairs.
DirectedGraph graph_from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i + 1));
  std::vector<Edge> edges;
  for (std::size_t i = 0, bit = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j, ++bit)
      if ((mask >> bit) & 1u) edges.push_back({i, j});
  return DirectedGraph::from_edges(labels, edges);
}

}  // namespace

TEST(Query, Validation) {
  EXPECT_THROW(validate_query({{}, {1}, {}}, 3), QueryError);
  EXPECT_THROW(validate_query({{0}, {}, {}}, 3), QueryError);
  EXPECT_THROW(validate_query({{0}, {0}, {}}, 3), QueryError);
  EXPECT_THROW(validate_query({{0}, {1}, {1}}, 3), QueryError);
  EXPECT_THROW(validate_query({{0}, {5}, {}}, 3), QueryError);
  EXPECT_NO_THROW(validate_query({{0}, {1}, {2}}, 3));
  EXPECT_THROW(d_separated(fixtures::chain(), {{0}, {0}, {}}), QueryError);
  EXPECT_THROW(p_separated(fixtures::chain(), {{0}, {}, {}}), QueryError);
}

TEST(DSeparation, ChainAndCollider) {
  const DirectedGraph chain = fixtures::chain();
  EXPECT_TRUE(d_separated(chain, query(chain, {"A"}, {"B"}, {"C"})));
  EXPECT_FALSE(d_separated(chain, query(chain, {"A"}, {"B"})));
  const DirectedGraph collider = fixtures::collider();
  EXPECT_TRUE(d_separated(collider, query(collider, {"A"}, {"B"})));
  EXPECT_FALSE(d_separated(collider, query(collider, {"A"}, {"B"}, {"C"})));
  const DirectedGraph desc = fixtures::collider_with_descendant();
  EXPECT_FALSE(d_separated(desc, query(desc, {"A"}, {"B"}, {"D"})));
  EXPECT_TRUE(d_separated(desc, query(desc, {"A"}, {"D"}, {"C"})));
}

TEST(DSeparation, TwinLoopsGraph) {
  const DirectedGraph g = fixtures::twin_loops().graph;
  EXPECT_TRUE(d_separated(g, query(g, {"v4"}, {"v5"}, {"v2"})));
  EXPECT_TRUE(d_separated_exhaustive(g, query(g, {"v4"}, {"v5"}, {"v2"})));
  EXPECT_FALSE(d_separated(g, query(g, {"v4"}, {"v5"}, {"v6"})));
}

TEST(DSeparation, CyclesAndSelfLoops) {
  const DirectedGraph loop = fixtures::xor_loop().graph;
  // Every path runs through a collider on the loop, yet X3 and X4 are correlated.
  EXPECT_TRUE(d_separated(loop, query(loop, {"v3"}, {"v4"})));
  EXPECT_FALSE(ci_holds(joint_distribution(fixtures::xor_loop()), query(loop, {"v3"}, {"v4"})));
  EXPECT_TRUE(d_separated(loop, query(loop, {"v3"}, {"v4"}, {"v1", "v2"})));
  const DirectedGraph self = DirectedGraph::build({"A", "B", "C"}, {{"A", "B"}, {"C", "B"}, {"B", "B"}});
  EXPECT_TRUE(d_separated(self, query(self, {"A"}, {"C"})));
  EXPECT_FALSE(d_separated(self, query(self, {"A"}, {"C"}, {"B"})));
}

// Reachability, simple-path enumeration and the test oracle agree on every graph
// with at most three vertices (self-loops included) and every query.
TEST(DSeparationProperty, AllSmallGraphs) {
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto queries = oracle::all_queries(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
      const DirectedGraph g = graph_from_mask(n, mask);
      for (const SeparationQuery& q : queries) {
        const bool expected = oracle::d_separated(g, q);
        ASSERT_EQ(d_separated(g, q), expected) << "mask " << mask;
        ASSERT_EQ(d_separated_exhaustive(g, q), expected) << "mask " << mask;
      }
    }
  }
}

TEST(DSeparationProperty, RandomGraphsUpToSix) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 4 + seed % 3;
    const DirectedGraph g = random_graph(n, 1 + seed % 2, 4, seed % 3 == 0, seed % 2 == 0, seed);
    const auto queries = oracle::all_queries(n);
    for (int k = 0; k < 40; ++k) {
      const SeparationQuery& q = queries[rng() % queries.size()];
      const bool expected = oracle::d_separated(g, q);
      ASSERT_EQ(d_separated(g, q), expected) << "seed " << seed;
      ASSERT_EQ(d_separated_exhaustive(g, q), expected) << "seed " << seed;
    }
  }
}

// Beyond 64 vertices the set-based fallback is used; compare it on a long chain and collider.
TEST(DSeparation, LargeGraphFallback) {
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < 80; ++i) labels.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < 79; ++i) edges.push_back({i, i + 1});
  edges.push_back({79, 78});
  const DirectedGraph g = DirectedGraph::from_edges(labels, edges);
  EXPECT_FALSE(d_separated(g, {{0}, {77}, {}}));
  EXPECT_TRUE(d_separated(g, {{0}, {77}, {40}}));
  EXPECT_TRUE(d_separated(g, {{0}, {79}, {}}));
  EXPECT_FALSE(d_separated(g, {{0}, {79}, {78}}));
}

TEST(DSeparationProperty, NoPathMeansSeparated) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DirectedGraph g = random_graph(6, 1, 4, false, true, seed);
    const auto reach = oracle::reachability(g);
    for (const SeparationQuery& q : oracle::all_queries(6)) {
      bool linked = false;
      // Undirected connectivity between V1 and V2 in the full graph.
      std::vector<bool> seen(g.size(), false);
      std::vector<VertexIndex> stack = q.x.to_vector();
      for (VertexIndex v : stack) seen[v] = true;
      while (!stack.empty()) {
        const VertexIndex v = stack.back();
        stack.pop_back();
        linked = linked || q.y.contains(v);
        for (VertexIndex w = 0; w < g.size(); ++w)
          if (!seen[w] && (g.has_edge(v, w) || g.has_edge(w, v))) {
            seen[w] = true;
            stack.push_back(w);
          }
      }
      if (!linked) ASSERT_TRUE(d_separated(g, q));
    }
  }
}

TEST(PSeparation, KnownGraphs) {
  const DirectedGraph loop = fixtures::xor_loop().graph;
  EXPECT_FALSE(p_separated(loop, query(loop, {"v3"}, {"v4"})).separated);
  const PSeparationWitness w = p_separated(loop, query(loop, {"v3"}, {"v4"}, {"v1", "v2"}));
  EXPECT_TRUE(w.separated);
  ASSERT_TRUE(w.split);
  EXPECT_EQ(*w.split, VertexSet{0});

  const DirectedGraph four = fixtures::four_cycle();
  EXPECT_TRUE(p_separated(four, query(four, {"v1"}, {"v3"}, {"v2", "v4"})).separated);
  EXPECT_TRUE(p_separated(four, query(four, {"v2"}, {"v4"}, {"v1", "v3"})).separated);

  const DirectedGraph twin = fixtures::twin_loops().graph;
  const PSeparationWitness n = p_separated(twin, query(twin, {"v4"}, {"v5"}, {"v2"}));
  EXPECT_FALSE(n.separated);
  EXPECT_FALSE(n.split);
}

TEST(PSeparation, OracleReuse) {
  const DirectedGraph twin = fixtures::twin_loops().graph;
  const PSeparationOracle o(twin);
  EXPECT_EQ(o.family_size(), enumerate_split_sets(twin).size());
  EXPECT_EQ(o.graph(), twin);
  for (const SeparationQuery& q : oracle::all_queries(4)) {
    const PSeparationWitness a = o.query(q);
    const PSeparationWitness b = p_separated(twin, q);
    EXPECT_EQ(a.separated, b.separated);
    EXPECT_EQ(a.split, b.split);
  }
  EXPECT_THROW(o.query({{0}, {20}, {}}), QueryError);
}

// Witness and verdict match the definition evaluated with the path oracle,
// including the canonical choice of the first witness.
TEST(PSeparationProperty, MatchesDefinition) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const DirectedGraph g = random_graph(n, 1, 2, false, seed % 3 == 0, seed);
    const PSeparationOracle o(g);
    for (const SeparationQuery& q : oracle::all_queries(n)) {
      const PSeparationWitness got = o.query(q);
      const auto expected = p_witness_oracle(g, q);
      ASSERT_EQ(got.separated, expected.has_value()) << "seed " << seed;
      ASSERT_EQ(got.split, expected) << "seed " << seed;
    }
  }
}

TEST(PSeparationProperty, AcyclicCollapse) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + seed % 4;
    const DirectedGraph g = random_graph(n, 1, 2, true, false, seed);
    const PSeparationOracle o(g);
    for (const SeparationQuery& q : oracle::all_queries(n)) ASSERT_EQ(o.query(q).separated, d_separated(g, q));
  }
}

TEST(CiHolds, Examples) {
  const JointDistribution d = joint_distribution(fixtures::xor_loop());
  EXPECT_FALSE(ci_holds(d, {{2}, {3}, {}}));
  EXPECT_TRUE(ci_holds(d, {{2}, {3}, {0, 1}}));
  const JointDistribution bits = joint_distribution(fixtures::must_parse(
      "vertex a : 0..1\nvertex b : 0..1\nerror a ~ uniform\nerror b ~ {0: 1/3, 1: 2/3}\n"));
  EXPECT_TRUE(ci_holds(bits, {{0}, {1}, {}}));
  EXPECT_THROW(ci_holds(d, {{2}, {2}, {}}), QueryError);
  EXPECT_THROW(ci_holds(marginal(d, {2, 3}), {{0}, {3}, {}}), QueryError);
}

TEST(CiHoldsProperty, MatchesDivisionForm) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const DirectedGraph g = random_graph(2 + seed % 3, 1, 2, false, seed % 4 == 0, seed);
    const FunctionalCausalModel m = random_model(g, 3, 2, seed);
    if (is_inconsistent(m)) continue;
    const JointDistribution d = joint_distribution(m);
    for (const SeparationQuery& q : oracle::all_queries(g.size())) ASSERT_EQ(ci_holds(d, q), oracle::ci_holds(d, q));
  }
}

TEST(SeparationProperty, DSeparationIsSoundOnAcyclicModels) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const DirectedGraph g = random_graph(n, 1, 2, true, false, seed);
    const JointDistribution d = joint_distribution(random_model(g, 2 + seed % 2, 2, seed));
    for (const SeparationQuery& q : oracle::all_queries(n))
      if (d_separated(g, q)) ASSERT_TRUE(ci_holds(d, q)) << "seed " << seed;
  }
}

TEST(SeparationProperty, PSeparationIsSoundOnCyclicModels) {
  int models = 0;
  for (std::uint64_t seed = 0; models < 60; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const DirectedGraph g = random_graph(n, 1, 2, false, seed % 4 == 0, seed);
    const FunctionalCausalModel m = random_model(g, 3, 2, seed);
    if (is_inconsistent(m)) continue;
    ++models;
    const JointDistribution d = joint_distribution(m);
    const PSeparationOracle o(g);
    for (const SeparationQuery& q : oracle::all_queries(n))
      if (o.query(q).separated) ASSERT_TRUE(ci_holds(d, q)) << "seed " << seed;
  }
}
