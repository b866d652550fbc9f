#pragma once

#include "sfc/flow.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

struct Metrics {
  double total_cost = 0.0;
  int iterations = 0;
  // Packet-weighted mean hops of raw data from injection to the first task.
  double h_data = 0.0;
  // Packet-weighted mean hops of final results from generation to delivery.
  double h_result = 0.0;
};

// Hop counters are pushed forward along each stage's topological order, so
// a node's mean hop count is the traffic-weighted average over its inflows
// (locally generated packets count zero hops). Both means are 0 when no
// packets are absorbed. `state` must come from compute_flows(s, phi).
Metrics hop_metrics(const Scenario& s, const Strategy& phi, const FlowState& state);

}  // namespace sfc
