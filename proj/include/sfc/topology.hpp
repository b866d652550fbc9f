#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sfc/graph.hpp"

namespace sfc {

enum class TopologyKind { ConnectedEr, BalancedTree, Fog, SmallWorld, FromFile };

struct TopologySpec {
  TopologyKind kind = TopologyKind::ConnectedEr;
  // connected_er / small_world
  int nodes = 20;
  double edge_probability = 0.1;
  // balanced_tree: number of levels of a complete binary tree
  int depth = 4;
  // fog: nodes per tree layer, root first; each layer is also chained linearly
  std::vector<int> layers = {1, 3, 6, 9};
  // small_world: ring lattice reach and number of random long-range chords
  int short_hops = 2;
  int long_chords = 120;
  // from_file
  std::filesystem::path path;
};

// Deterministic for a fixed (spec, seed). Throws std::invalid_argument on bad
// parameters and TopologyError on malformed or disconnected files.
Graph generate_topology(const TopologySpec& spec, std::uint64_t seed);

Graph connected_er(int n, double p, std::uint64_t seed);
Graph balanced_tree(int depth);
Graph fog(const std::vector<int>& layers);
Graph small_world(int n, int short_hops, int long_chords, std::uint64_t seed);

// Edge list, one undirected edge per line: "u v [capacity]". Tokens are node
// names; ids follow first appearance. '#' starts a comment.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);

TopologyKind parse_topology_kind(const std::string& name);
std::string to_string(TopologyKind kind);

// Directory holding the bundled edge lists (abilene, lhc, geant).
std::filesystem::path data_dir();

}  // namespace sfc
