#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sfc/flow.hpp"
#include "sfc/marginals.hpp"
#include "sfc/optimality.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

struct GpConfig {
  double alpha = 0.05;
  int max_iters = 20000;
  // Convergence: largest gap e_ij over positive-mass directions <= tol.
  double tol = 1e-6;
  double tol_mass = 1e-9;
  // Halve alpha whenever a step would raise T (or leave the cost domain).
  bool adaptive = true;
  double min_alpha = 1e-14;
  // After an accepted step the stepsize grows by this factor, up to
  // max_alpha (adaptive mode only).
  double alpha_growth = 1.25;
  double max_alpha = 1e4;
  // Throw NotConverged instead of returning the last iterate.
  bool strict = false;
  // Rows eligible for updates; all rows when empty.
  std::function<bool(int stage, NodeId node)> row_filter;
  // Called with every accepted iterate, including the start.
  std::function<void(const Strategy&, const FlowState&)> on_iterate;
};

// Outcome of one row update.
struct RowUpdate {
  double max_gap = 0.0;  // over directions with mass > tol_mass
  int minimal = 0;       // N: unblocked directions with e = 0
  double moved = 0.0;    // S: total mass taken from non-minimal directions
};

// In-place update of one forwarding row from its modified marginals.
// `blocked` may be empty (nothing blocked) and otherwise flags blocked slots
// with a nonzero value. Blocked slots are zeroed; an unblocked slot with gap
// e > tol loses min(phi, alpha * e) (min(phi, alpha) when e is infinite);
// the removed mass is split equally over the minimal directions.
RowUpdate update_row(std::span<double> phi, std::span<const double> delta,
                     std::span<const double> blocked, double alpha, double tol, double tol_mass);

struct StepDiagnostics {
  RowTable gaps;  // e_ij, +inf on absent or blocked directions
  std::vector<std::vector<int>> minimal;    // N_i, [stage][node]
  std::vector<std::vector<double>> moved;   // S_i, [stage][node]
  BlockedSets blocked;
  double max_gap = 0.0;
};

// One synchronous update of every (eligible) row from the current marginals.
std::pair<Strategy, StepDiagnostics> gp_step(const Scenario& s, const Strategy& phi,
                                             const GpConfig& config);
std::pair<Strategy, StepDiagnostics> gp_step(const Scenario& s, const Strategy& phi,
                                             const MarginalSnapshot& snap, const GpConfig& config);

struct TraceEntry {
  int iter;
  double total_cost;
  double max_gap;
  double alpha;
};

struct GpResult {
  Strategy strategy;
  FlowState state;
  std::vector<TraceEntry> trace;
  int iterations = 0;
  int productive_iterations = 0;
  bool converged = false;
};

// Gradient projection from phi0 (init_strategy when absent). Returns the
// last iterate with converged = false after max_iters unless config.strict.
GpResult run_gp(const Scenario& s, const std::optional<Strategy>& phi0, const GpConfig& config = {});

// Carries phi_prev over to new_scenario (same node ids, possibly different
// links, extra nodes or rates) and warm-starts run_gp from it. Mass on a
// removed link moves to the remaining direction with the smallest modified
// marginal under the old scenario; new links start at 0 and new nodes get a
// shortest-hop row. Throws NoFeasibleStrategy when the repaired strategy is
// looped or has infinite cost.
GpResult adapt(const Scenario& old_scenario, const Scenario& new_scenario, const Strategy& phi_prev,
               const GpConfig& config = {});
Strategy repair_strategy(const Scenario& old_scenario, const Scenario& new_scenario,
                         const Strategy& phi_prev);

// init_strategy, or when that fails, a rate homotopy: solve at a scaled-down
// input where a shortest-path start is finite and raise the scale back to 1,
// re-optimizing at every level.
Strategy feasible_start(const Scenario& s, const GpConfig& config = {});

}  // namespace sfc
