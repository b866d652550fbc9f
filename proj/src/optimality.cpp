#include "sfc/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfc/errors.hpp"

namespace sfc {

MarginalSnapshot snapshot(const Scenario& s, const Strategy& phi) {
  MarginalSnapshot snap;
  snap.state = compute_flows(s, phi);
  snap.marginals = traffic_marginals(s, phi, snap.state);
  snap.deltas = modified_marginals(s, snap.state, snap.marginals);
  return snap;
}

namespace {

template <typename Score>
OptimalityReport check_rows(const Scenario& s, const Strategy& phi, const MarginalSnapshot& snap,
                            CheckTolerance tol, Score score) {
  OptimalityReport rep;
  const StageIndex stages(s.apps);
  std::vector<double> vals;
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    const Application& app = s.apps[a];
    for (NodeId i = 0; i < s.node_count(); ++i) {
      if (k == app.chain_length && i == app.destination) continue;
      const auto row = phi.row(st, i);
      const auto drow = snap.deltas.row(st, i);
      const double t = snap.state.traffic[st][i];
      vals.resize(row.size());
      double row_min = kInf;
      for (std::size_t q = 0; q < row.size(); ++q) {
        vals[q] = score(t, drow[q]);
        row_min = std::min(row_min, vals[q]);
      }
      for (std::size_t q = 0; q < row.size(); ++q) {
        if (row[q] > tol.tol_mass && vals[q] > row_min + tol.tol) {
          rep.holds = false;
          rep.violations.push_back(
              {i, a, k, phi.target(i, static_cast<int>(q)), row[q], vals[q], row_min});
        }
      }
    }
  }
  return rep;
}

}  // namespace

OptimalityReport check_kkt(const Scenario& s, const Strategy& phi, const MarginalSnapshot& snap,
                           CheckTolerance tol) {
  return check_rows(s, phi, snap, tol, [](double t, double delta) {
    return std::isinf(delta) ? kInf : t * delta;
  });
}

OptimalityReport check_kkt(const Scenario& s, const Strategy& phi, CheckTolerance tol) {
  return check_kkt(s, phi, snapshot(s, phi), tol);
}

OptimalityReport check_sufficient(const Scenario& s, const Strategy& phi,
                                  const MarginalSnapshot& snap, CheckTolerance tol) {
  return check_rows(s, phi, snap, tol, [](double, double delta) { return delta; });
}

OptimalityReport check_sufficient(const Scenario& s, const Strategy& phi, CheckTolerance tol) {
  return check_sufficient(s, phi, snapshot(s, phi), tol);
}

double geodesic_probe(const Scenario& s, const Strategy& phi1, const Strategy& phi2, int samples) {
  if (samples < 2) throw std::invalid_argument("geodesic probe needs at least two samples");
  const FlowState a = compute_flows(s, phi1);
  const FlowState b = compute_flows(s, phi2);
  const StageIndex stages(s.apps);
  for (int st = 0; st < stages.size(); ++st) {
    for (NodeId i = 0; i < s.node_count(); ++i) {
      if (!(a.traffic[st][i] > 0.0) || !(b.traffic[st][i] > 0.0)) {
        throw ZeroTrafficNode("node " + s.graph.name(i) + " carries no traffic at stage " +
                              std::to_string(st));
      }
    }
  }

  double worst = 0.0;
  Strategy phi(s);
  for (int n = 0; n < samples; ++n) {
    const double t = static_cast<double>(n) / (samples - 1);
    for (int st = 0; st < stages.size(); ++st) {
      const auto [app_id, k] = stages.ref(st);
      const Application& app = s.apps[app_id];
      for (NodeId i = 0; i < s.node_count(); ++i) {
        auto row = phi.row(st, i);
        if (k == app.chain_length && i == app.destination) continue;
        const double traffic = (1 - t) * a.traffic[st][i] + t * b.traffic[st][i];
        row[Strategy::kCpuSlot] = ((1 - t) * a.cpu_flow[st][i] + t * b.cpu_flow[st][i]) / traffic;
        for (std::size_t q = 1; q < row.size(); ++q) {
          const LinkId l = s.graph.out_link(i, static_cast<int>(q) - 1);
          row[q] = ((1 - t) * a.link_flow[st][l] + t * b.link_flow[st][l]) / traffic;
        }
      }
    }
    const double T = compute_flows(s, phi).total_cost;
    const double chord = (1 - t) * a.total_cost + t * b.total_cost;
    worst = std::max(worst, T - chord);
  }
  return worst;
}

}  // namespace sfc
