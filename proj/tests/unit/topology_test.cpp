#include <gtest/gtest.h>

#include "sfc/errors.hpp"
#include "sfc/graph.hpp"
#include "sfc/topology.hpp"

using namespace sfc;

namespace {

void expect_graph_invariants(const Graph& g) {
  EXPECT_EQ(g.link_count() % 2, 0);
  for (LinkId l = 0; l < g.link_count(); ++l) {
    const Link& k = g.link(l);
    EXPECT_NE(k.from, k.to);
    EXPECT_TRUE(g.has_link(k.to, k.from));
    EXPECT_EQ(g.link(g.reverse(l)).from, k.to);
  }
  EXPECT_TRUE(is_connected(g.node_count(), g.edges()));
}

}  // namespace

TEST(Topology, BalancedTreeDepthFour) {
  const Graph g = balanced_tree(4);
  EXPECT_EQ(g.node_count(), 15);
  EXPECT_EQ(g.undirected_edge_count(), 14);
  EXPECT_EQ(g.link_count(), 28);
}

TEST(Topology, ConnectedErHasSpanningChain) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = connected_er(20, 0.1, seed);
    EXPECT_EQ(g.node_count(), 20);
    EXPECT_GE(g.undirected_edge_count(), 19);
    expect_graph_invariants(g);
  }
}

TEST(Topology, BundledFiles) {
  const Graph abilene = load_edge_list(data_dir() / "abilene.edges");
  EXPECT_EQ(abilene.node_count(), 11);
  EXPECT_EQ(abilene.undirected_edge_count(), 14);
  const Graph lhc = load_edge_list(data_dir() / "lhc.edges");
  EXPECT_EQ(lhc.node_count(), 16);
  EXPECT_EQ(lhc.undirected_edge_count(), 31);
  const Graph geant = load_edge_list(data_dir() / "geant.edges");
  EXPECT_EQ(geant.node_count(), 22);
  EXPECT_EQ(geant.undirected_edge_count(), 33);
}

TEST(Topology, FogAndSmallWorldSizes) {
  const Graph f = fog({1, 3, 6, 9});
  EXPECT_EQ(f.node_count(), 19);
  expect_graph_invariants(f);
  const Graph sw = small_world(100, 2, 120, 1);
  EXPECT_EQ(sw.node_count(), 100);
  EXPECT_EQ(sw.undirected_edge_count(), 320);
  expect_graph_invariants(sw);
}

TEST(Topology, GeneratorsSatisfyInvariantsOverSeeds) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto kind : {TopologyKind::ConnectedEr, TopologyKind::BalancedTree, TopologyKind::Fog,
                      TopologyKind::SmallWorld}) {
      TopologySpec spec;
      spec.kind = kind;
      spec.nodes = 30;
      spec.long_chords = 20;
      expect_graph_invariants(generate_topology(spec, seed));
    }
  }
}

TEST(Topology, Deterministic) {
  TopologySpec spec;
  spec.kind = TopologyKind::SmallWorld;
  spec.nodes = 40;
  spec.long_chords = 30;
  EXPECT_EQ(generate_topology(spec, 9).links(), generate_topology(spec, 9).links());
}

TEST(Topology, EdgeListParsing) {
  const Graph g = parse_edge_list("# comment\na b 3.5\nb c\n\nc a # tail\n");
  EXPECT_EQ(g.node_count(), 3);
  EXPECT_EQ(g.undirected_edge_count(), 3);
  EXPECT_EQ(g.name(0), "a");
  EXPECT_DOUBLE_EQ(g.capacity_hint(g.link_id(0, 1)), 3.5);
  EXPECT_EQ(g.find("c"), 2);
}

TEST(Topology, Errors) {
  EXPECT_THROW(parse_edge_list("a b\nc d\n"), TopologyError);
  EXPECT_THROW(parse_edge_list("a\n"), TopologyError);
  EXPECT_THROW(parse_edge_list("a a\n"), TopologyError);
  EXPECT_THROW(parse_edge_list("a b x\n"), TopologyError);
  EXPECT_THROW(load_edge_list("/nonexistent/file.edges"), TopologyError);
  EXPECT_THROW(parse_topology_kind("hypercube"), std::invalid_argument);
  EXPECT_THROW(connected_er(1, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(connected_er(5, 1.5, 0), std::invalid_argument);
  EXPECT_EQ(parse_topology_kind(to_string(TopologyKind::Fog)), TopologyKind::Fog);
}
