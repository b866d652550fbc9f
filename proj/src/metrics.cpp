#include "sfc/metrics.hpp"

#include <vector>

namespace sfc {

namespace {

// Mean hop count of the packets present at each node of one stage.
std::vector<double> mean_hops(const Scenario& s, const FlowState& state, int stage) {
  const int n = s.node_count();
  std::vector<double> hop_mass(n, 0.0);
  std::vector<double> mean(n, 0.0);
  const auto& t = state.traffic[stage];
  const auto& f = state.link_flow[stage];
  for (NodeId i : state.order[stage]) {
    if (t[i] <= 0.0) continue;
    mean[i] = hop_mass[i] / t[i];
    for (int q = 0; q < s.graph.degree(i); ++q) {
      const LinkId l = s.graph.out_link(i, q);
      if (f[l] > 0.0) hop_mass[s.graph.link(l).to] += f[l] * (mean[i] + 1.0);
    }
  }
  return mean;
}

}  // namespace

Metrics hop_metrics(const Scenario& s, const Strategy& /*phi*/, const FlowState& state) {
  const StageIndex stages(s.apps);
  double data_mass = 0.0, data_packets = 0.0;
  double result_mass = 0.0, result_packets = 0.0;
  for (const auto& app : s.apps) {
    if (app.chain_length > 0) {
      const int sid = stages.of(app.id, 0);
      const auto mean = mean_hops(s, state, sid);
      for (NodeId i = 0; i < s.node_count(); ++i) {
        const double g = state.cpu_flow[sid][i];
        data_mass += g * mean[i];
        data_packets += g;
      }
    }
    const int fid = stages.of(app.id, app.chain_length);
    const auto mean = mean_hops(s, state, fid);
    const double delivered = state.traffic[fid][app.destination];
    result_mass += delivered * mean[app.destination];
    result_packets += delivered;
  }

  Metrics m;
  m.total_cost = state.total_cost;
  m.h_data = data_packets > 0.0 ? data_mass / data_packets : 0.0;
  m.h_result = result_packets > 0.0 ? result_mass / result_packets : 0.0;
  return m;
}

}  // namespace sfc
