#pragma once

#include <ostream>
#include <vector>

#include "sfc/flow.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

// Per-stage link and CPU flows, packets/sec, indexed [stage][link] and
// [stage][node].
struct FlowVector {
  std::vector<std::vector<double>> link_flow;
  std::vector<std::vector<double>> cpu_flow;
};

FlowVector flows_of(const FlowState& state);

// Aggregate loads F, G and the cost T of a flow vector. Throws
// CapacityExceeded outside the cost domain.
double flow_cost(const Scenario& s, const FlowVector& f);

// Largest conservation residual over all (node, stage).
double conservation_error(const Scenario& s, const FlowVector& f);

// A source-to-destination walk in which a repeated node marks a computation
// step: nodes = {1, 1, 2} computes task 1 at node 1, then forwards to 2.
struct ExtendedPath {
  int app = 0;
  NodeId source = 0;
  std::vector<NodeId> nodes;

  bool operator==(const ExtendedPath&) const = default;
};

struct OracleConfig {
  // Stop when the conditional-gradient gap is <= tol * max(1, T).
  double tol = 1e-9;
  int max_iters = 100000;
};

struct OracleResult {
  double total_cost = 0.0;
  FlowVector flows;
  double gap = 0.0;
  int iterations = 0;
  std::vector<double> gap_history;
  std::vector<double> cost_history;
  std::vector<ExtendedPath> paths;
  std::vector<double> path_flow;
};

// Minimizes T over the flow domain. Every (application, source) pair is a
// commodity routed over extended paths; each iteration linearizes the costs,
// finds the cheapest extended path of every commodity on the layered graph
// (K+1 copies of V joined by CPU edges weighted w * C'), and moves flow from
// the commodity's costlier paths onto the cheapest one with an exact line
// search. Throws NoFeasibleStrategy when no finite-cost loading is found and
// NotConverged after max_iters.
OracleResult solve_flow_domain(const Scenario& s, const OracleConfig& config = {});

struct BruteForceResult {
  double total_cost = 0.0;
  std::vector<ExtendedPath> paths;
  std::vector<double> path_flow;
  double gap = 0.0;
  int iterations = 0;
};

// All extended paths whose per-stage segments are simple paths, optimized by
// projected gradient over the per-commodity path simplices until the gap is
// <= 1e-8. Throws TooLarge beyond 6 nodes, K = 2, 2 applications or 200
// paths.
BruteForceResult enumerate_bruteforce(const Scenario& s);

// Every extended path of every (application, source) pair whose per-stage
// segments are simple paths. Throws TooLarge past `limit` paths.
std::vector<ExtendedPath> enumerate_paths(const Scenario& s, int limit);

// phi = f / t after cancelling circulations inside each stage. Rows without
// traffic point along the layered shortest-path tree of the linearized costs
// at the given flows, i.e. to their minimal modified marginal.
Strategy strategy_from_flows(const Scenario& s, const FlowVector& f);

// CSV with columns app,k,from,to,flow ("cpu" as the target of computation).
void write_flows_csv(std::ostream& out, const Scenario& s, const FlowVector& f);

}  // namespace sfc
