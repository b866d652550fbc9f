#pragma once

#include <vector>

#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

// Exogenous traffic added directly at (node, stage), in packets/sec.
struct Injection {
  NodeId node;
  int stage;
  double rate;
};

// Flows induced by a strategy. Per-stage vectors are indexed [stage][node]
// or [stage][link].
struct FlowState {
  std::vector<std::vector<double>> traffic;     // t_i(a,k)
  std::vector<std::vector<double>> link_flow;   // f_ij(a,k)
  std::vector<std::vector<double>> cpu_flow;    // g_i(a,k)
  std::vector<double> link_total;               // F_ij, bits/sec
  std::vector<double> cpu_total;                // G_i, workload/sec
  double total_cost = 0.0;                      // T
  // Topological order of each stage's support, reused by the marginal sweep.
  std::vector<std::vector<NodeId>> order;
};

// Single topological pass per stage, stages of an application in increasing
// k. Throws LoopDetected on a cyclic stage and CapacityExceeded when a queue
// cost is driven to or past its capacity (or a CPU-less node receives work).
FlowState compute_flows(const Scenario& s, const Strategy& phi,
                        const std::vector<Injection>& extra = {});

// T from aggregate link and CPU loads alone. Throws CapacityExceeded.
double total_cost(const Scenario& s, const std::vector<double>& link_total,
                  const std::vector<double>& cpu_total);

}  // namespace sfc
