#pragma once

#include <string>

#include "sfc/flow.hpp"
#include "sfc/gp.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

struct BaselineResult {
  std::string name;
  Strategy strategy;
  FlowState state;  // state.total_cost = +inf when infeasible
  bool feasible = true;
};

// Shortest Path Optimal Computation placement. Routing is fixed to the
// shortest-path tree toward each destination under D'(0) link weights; only
// the CPU fractions along the tree are optimized, by cyclic coordinate
// descent with an exact 1-D line search per fraction. Throws
// NoFeasibleStrategy when no start has finite cost or a destination of an
// application with tasks has no CPU.
BaselineResult spoc(const Scenario& s, double tol = 1e-9);

// Local Computation Optimal Forwarding. Every task runs at the data source;
// run_gp optimizes only the final-stage forwarding rows. Throws
// LocalComputationInfeasible when a source has no CPU or the local workload
// saturates it.
BaselineResult lcof(const Scenario& s, const GpConfig& config = {});

// Linear Program Rounded for Service Chain (reconstruction). One CPU per task
// and application, chosen by a linear estimate with D'(0), C'(0): rate-weighted
// data hops to the first task, w * C'(0) per task and hops between task
// nodes; result hops to the destination are ignored. Routing is unsplit along
// D'(0) shortest paths. Capacity violations yield feasible = false.
BaselineResult lpr_sc(const Scenario& s);

}  // namespace sfc
