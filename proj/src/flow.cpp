#include "sfc/flow.hpp"

#include <string>

#include "sfc/errors.hpp"

namespace sfc {

double total_cost(const Scenario& s, const std::vector<double>& link_total,
                  const std::vector<double>& cpu_total) {
  double T = 0.0;
  for (LinkId l = 0; l < s.graph.link_count(); ++l) {
    const double F = link_total[l];
    if (!s.link_costs[l].in_domain(F)) {
      const auto& lk = s.graph.link(l);
      throw CapacityExceeded("link (" + s.graph.name(lk.from) + "," + s.graph.name(lk.to) +
                             ") flow " + std::to_string(F) + " reaches capacity " +
                             std::to_string(s.link_costs[l].capacity()));
    }
    T += s.link_costs[l].eval(F);
  }
  for (NodeId i = 0; i < s.node_count(); ++i) {
    const double G = cpu_total[i];
    if (!s.has_cpu(i)) {
      if (G > 0.0) throw CapacityExceeded("node " + s.graph.name(i) + " has no CPU");
      continue;
    }
    if (!s.comp_costs[i]->in_domain(G)) {
      throw CapacityExceeded("CPU at " + s.graph.name(i) + " workload " + std::to_string(G) +
                             " reaches capacity " + std::to_string(s.comp_costs[i]->capacity()));
    }
    T += s.comp_costs[i]->eval(G);
  }
  return T;
}

FlowState compute_flows(const Scenario& s, const Strategy& phi, const std::vector<Injection>& extra) {
  const StageIndex stages(s.apps);
  const int n = s.node_count();
  const int m = s.graph.link_count();
  const int ns = stages.size();

  FlowState st;
  st.traffic.assign(ns, std::vector<double>(n, 0.0));
  st.link_flow.assign(ns, std::vector<double>(m, 0.0));
  st.cpu_flow.assign(ns, std::vector<double>(n, 0.0));
  st.link_total.assign(m, 0.0);
  st.cpu_total.assign(n, 0.0);
  st.order.resize(ns);

  for (const auto& inj : extra) st.traffic[inj.stage][inj.node] += inj.rate;

  for (const auto& app : s.apps) {
    for (int k = 0; k <= app.chain_length; ++k) {
      const int sid = stages.of(app.id, k);
      auto order = stage_order(phi, sid);
      if (!order) {
        throw LoopDetected("loop in stage (" + std::to_string(app.id) + "," + std::to_string(k) + ")");
      }
      auto& t = st.traffic[sid];
      if (k == 0) {
        for (NodeId i = 0; i < n; ++i) t[i] += s.rate(i, app.id);
      } else {
        const auto& g_prev = st.cpu_flow[sid - 1];
        for (NodeId i = 0; i < n; ++i) t[i] += g_prev[i];
      }
      const double L = app.packet_size(k);
      auto& f = st.link_flow[sid];
      auto& g = st.cpu_flow[sid];
      for (NodeId i : *order) {
        const double ti = t[i];
        if (ti == 0.0) continue;
        const auto row = phi.row(sid, i);
        g[i] = ti * row[Strategy::kCpuSlot];
        if (k < app.chain_length) st.cpu_total[i] += app.comp_weight(i, k) * g[i];
        for (std::size_t q = 1; q < row.size(); ++q) {
          if (row[q] == 0.0) continue;
          const LinkId l = s.graph.out_link(i, static_cast<int>(q) - 1);
          const double fl = ti * row[q];
          f[l] = fl;
          t[s.graph.link(l).to] += fl;
          st.link_total[l] += L * fl;
        }
      }
      st.order[sid] = std::move(*order);
    }
  }
  st.total_cost = total_cost(s, st.link_total, st.cpu_total);
  return st;
}

}  // namespace sfc
