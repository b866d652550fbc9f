#pragma once

#include <vector>

#include "sfc/flow.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

// dT/dt_i(a,k), indexed [stage][node].
struct MarginalTable {
  std::vector<std::vector<double>> value;

  double at(int stage, NodeId i) const { return value[stage][i]; }
};

// Modified marginals delta_ij(a,k) per row slot; +inf for directions that do
// not exist (CPU at the final stage or on CPU-less nodes, non-neighbors).
class DeltaTable : public RowTable {
 public:
  DeltaTable() = default;
  explicit DeltaTable(const Scenario& s) : RowTable(s, kInf) {}

  double delta(int stage, NodeId i, NodeId to) const { return get(stage, i, to, kInf); }
};

// Blocked directions per row slot (1.0 = blocked). Non-neighbors are always
// blocked; the CPU never is.
class BlockedSets : public RowTable {
 public:
  BlockedSets() = default;
  explicit BlockedSets(const Scenario& s) : RowTable(s, 0.0) {}

  bool blocked(int stage, NodeId i, NodeId to) const { return get(stage, i, to, 1.0) != 0.0; }
};

// Link and CPU derivatives D'_ij(F_ij), C'_i(G_i) at the current loads
// (+inf for nodes without a CPU).
struct LoadMarginals {
  std::vector<double> link;
  std::vector<double> cpu;
};
LoadMarginals load_marginals(const Scenario& s, const FlowState& state);

// Reverse sweep over stages (k descending) and, within a stage, reverse
// topological order; each node reads only its own measurements and the
// values of its downstream neighbors.
MarginalTable traffic_marginals(const Scenario& s, const Strategy& phi, const FlowState& state);

DeltaTable modified_marginals(const Scenario& s, const FlowState& state,
                              const MarginalTable& marginals);

// A neighbor j with phi_ij = 0 is blocked at (i, stage) when
// dT/dt_j >= dT/dt_i, or when j's downstream support of that stage contains
// an improper link (p,q): phi_pq > 0 with dT/dt_q >= dT/dt_p. The improper
// flag travels upstream along the same sweep that produces the marginals.
BlockedSets blocked_sets(const Scenario& s, const Strategy& phi, const FlowState& state,
                         const MarginalTable& marginals);

}  // namespace sfc
