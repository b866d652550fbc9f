#pragma once

#include <vector>

#include "sfc/flow.hpp"
#include "sfc/marginals.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

// A direction j violates a row when phi_ij > tol_mass and its score exceeds
// the row minimum by more than tol.
struct CheckTolerance {
  double tol = 1e-6;
  double tol_mass = 1e-9;
};

struct OptimalityViolation {
  NodeId node;
  int app;
  int k;
  NodeId direction;  // Strategy::kCpu for the CPU
  double fraction;
  double value;
  double row_min;
};

struct OptimalityReport {
  bool holds = true;
  std::vector<OptimalityViolation> violations;
};

// Everything the checks need, computed once.
struct MarginalSnapshot {
  FlowState state;
  MarginalTable marginals;
  DeltaTable deltas;
};
MarginalSnapshot snapshot(const Scenario& s, const Strategy& phi);

// KKT necessary condition: scores dT/dphi_ij = t_i * delta_ij (+inf for
// absent directions, even at zero traffic).
OptimalityReport check_kkt(const Scenario& s, const Strategy& phi, CheckTolerance tol = {});
OptimalityReport check_kkt(const Scenario& s, const Strategy& phi, const MarginalSnapshot& snap,
                           CheckTolerance tol = {});

// Sufficient condition: scores are the modified marginals delta_ij, so
// zero-traffic rows are constrained as well.
OptimalityReport check_sufficient(const Scenario& s, const Strategy& phi, CheckTolerance tol = {});
OptimalityReport check_sufficient(const Scenario& s, const Strategy& phi,
                                  const MarginalSnapshot& snap, CheckTolerance tol = {});

// Maps both strategies to link/CPU flows, interpolates the flows linearly on
// `samples` evenly spaced points of [0,1], maps back through phi = f / t and
// re-evaluates T. Returns max(0, max_t T(gamma(t)) - ((1-t) T1 + t T2)).
// Throws ZeroTrafficNode if either strategy leaves some (node, stage) without
// traffic.
double geodesic_probe(const Scenario& s, const Strategy& phi1, const Strategy& phi2, int samples = 11);

}  // namespace sfc
