#pragma once

#include <vector>

#include "sfc/graph.hpp"
#include "sfc/scenario.hpp"

namespace sfc {

// Shortest-path in-tree toward a target set. next[i] is the next hop of i
// (-1 at targets and unreachable nodes). Ties prefer the smaller next-hop id.
struct HopTree {
  std::vector<double> dist;
  std::vector<NodeId> next;
};

HopTree shortest_tree_to(const Graph& g, const std::vector<double>& link_weight,
                         const std::vector<NodeId>& targets);

// D'_l(0) for every link.
std::vector<double> zero_flow_marginals(const Scenario& s);

// Unit weight per link.
std::vector<double> hop_weights(const Graph& g);

}  // namespace sfc
