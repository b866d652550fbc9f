#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "sfc/gp.hpp"
#include "sfc/optimality.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

// Concave increasing utility on [0, cap], normalized so that U(0) = 0.
struct Utility {
  enum class Kind { AlphaFair, Linear };

  Kind kind = Kind::Linear;
  double alpha = 1.0;    // AlphaFair
  double epsilon = 0.1;  // AlphaFair with alpha >= 1
  double slope = 1.0;    // Linear
  double cap = kInf;     // r-bar

  static Utility alpha_fair(double alpha, double epsilon = 0.1, double cap = kInf);
  static Utility linear(double slope, double cap = kInf);
};

// Both throw std::out_of_range for r outside [0, cap]. For 0 < alpha < 1 the
// derivative at 0 is +inf.
double utility_eval(const Utility& u, double r);
double utility_prime(const Utility& u, double r);

// Base scenario plus one virtual gateway per physical node. The gateway of
// node i receives cap_i(a) and splits it between the admit link (i^V, i)
// (zero cost) and the reject link (i^V, d_a) whose cost is
// U(cap) - U(cap - f), the utility lost by rejecting f.
struct ExtendedScenario {
  Scenario base;
  std::vector<std::vector<double>> caps;          // [node][app]
  std::vector<std::vector<Utility>> utilities;    // [node][app]

  int physical_count() const { return base.node_count(); }
  int node_count() const { return 2 * base.node_count(); }
  NodeId virtual_node(NodeId i) const { return base.node_count() + i; }
};

// Utilities get their cap from `caps`. Throws std::invalid_argument on a
// negative cap or mismatched shapes.
ExtendedScenario extend_scenario(const Scenario& s, const std::vector<std::vector<double>>& caps,
                                 const std::vector<std::vector<Utility>>& utilities);
// Caps taken from s.input_rates, the same utility everywhere.
ExtendedScenario extend_scenario(const Scenario& s, const Utility& utility);

// Gateway rows are {phi_{i^V i}, phi_{i^V d_a}}, indexed [node][app].
struct ExtendedStrategy {
  Strategy physical;
  std::vector<std::vector<std::array<double, 2>>> gate;

  static constexpr int kAdmit = 0;
  static constexpr int kReject = 1;

  double admit(NodeId i, int a) const { return gate[i][a][kAdmit]; }
};

// Rejects everything; physical rows follow the zero-load shortest paths of
// the layered graph, so the start already satisfies the physical condition.
ExtendedStrategy reject_all(const ExtendedScenario& es);
// Admits everything with the given physical rows.
ExtendedStrategy admit_all(const ExtendedScenario& es, const Strategy& physical);

// Base scenario with input rates r = cap * phi_{i^V i}.
Scenario admitted_scenario(const ExtendedScenario& es, const ExtendedStrategy& phi);

struct ExtendedState {
  FlowState physical;                           // flows at the admitted rates
  std::vector<std::vector<double>> admitted;    // r_i(a)
  double utility = 0.0;                         // sum U(r)
  double rejection_cost = 0.0;                  // sum U(cap) - U(r)
  double total_cost = 0.0;                      // T^E = T + rejection_cost
  double utility_minus_cost = 0.0;              // sum U(r) - T
};

// Throws CapacityExceeded or LoopDetected like compute_flows.
ExtendedState evaluate(const ExtendedScenario& es, const ExtendedStrategy& phi);

// Physical marginals plus the gateway deltas {dT/dt_i(a,0), U'(r_i(a))}.
struct ExtendedSnapshot {
  ExtendedState state;
  MarginalSnapshot physical;
  std::vector<std::vector<std::array<double, 2>>> gate_delta;
};
ExtendedSnapshot extended_snapshot(const ExtendedScenario& es, const ExtendedStrategy& phi);

// The sufficient condition on every physical row plus, on every gateway with
// cap > 0: admit > tol_mass needs dT/dt <= U' + tol and reject > tol_mass
// needs U' <= dT/dt + tol. Gateway violations carry node = i^V, k = 0 and
// direction i (admit) or d_a (reject).
OptimalityReport check_sufficient_cc(const ExtendedScenario& es, const ExtendedStrategy& phi,
                                     CheckTolerance tol = {});

struct CcResult {
  ExtendedStrategy strategy;
  ExtendedState state;
  std::vector<TraceEntry> trace;  // total_cost is T^E
  int iterations = 0;
  bool converged = false;
};

// Gradient projection on the extended problem. Gateway rows use the same
// row update as physical rows. Starts from reject_all unless phi0 is given.
// Throws NotConverged when config.strict and the iteration cap is hit.
CcResult run_gp_cc(const ExtendedScenario& es, const GpConfig& config = {},
                   const std::optional<ExtendedStrategy>& phi0 = std::nullopt);

// CSV: node,app,cap,admitted,marginal_utility,marginal_cost.
void write_admission_csv(std::ostream& out, const ExtendedScenario& es, const ExtendedStrategy& phi);

}  // namespace sfc
