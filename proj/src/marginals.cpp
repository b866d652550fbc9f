#include "sfc/marginals.hpp"

#include <ranges>

#include "sfc/errors.hpp"

namespace sfc {

LoadMarginals load_marginals(const Scenario& s, const FlowState& state) {
  LoadMarginals lm;
  lm.link.resize(s.graph.link_count());
  lm.cpu.resize(s.node_count());
  for (LinkId l = 0; l < s.graph.link_count(); ++l) lm.link[l] = s.link_costs[l].prime(state.link_total[l]);
  for (NodeId i = 0; i < s.node_count(); ++i) {
    lm.cpu[i] = s.has_cpu(i) ? s.comp_costs[i]->prime(state.cpu_total[i]) : kInf;
  }
  return lm;
}

MarginalTable traffic_marginals(const Scenario& s, const Strategy& phi, const FlowState& state) {
  const StageIndex stages(s.apps);
  const LoadMarginals lm = load_marginals(s, state);
  MarginalTable mt;
  mt.value.assign(stages.size(), std::vector<double>(s.node_count(), 0.0));

  for (const auto& app : s.apps) {
    for (int k = app.chain_length; k >= 0; --k) {
      const int st = stages.of(app.id, k);
      if (state.order.size() <= static_cast<std::size_t>(st) ||
          state.order[st].size() != static_cast<std::size_t>(s.node_count())) {
        throw LoopDetected("flow state carries no topological order for stage " + std::to_string(st));
      }
      const double L = app.packet_size(k);
      auto& m = mt.value[st];
      for (NodeId i : std::views::reverse(state.order[st])) {
        const auto row = phi.row(st, i);
        double acc = 0.0;
        for (std::size_t q = 1; q < row.size(); ++q) {
          if (row[q] == 0.0) continue;
          const LinkId l = s.graph.out_link(i, static_cast<int>(q) - 1);
          acc += row[q] * (L * lm.link[l] + m[s.graph.link(l).to]);
        }
        if (k < app.chain_length && row[Strategy::kCpuSlot] != 0.0) {
          acc += row[Strategy::kCpuSlot] *
                 (app.comp_weight(i, k) * lm.cpu[i] + mt.value[st + 1][i]);
        }
        m[i] = acc;
      }
    }
  }
  return mt;
}

DeltaTable modified_marginals(const Scenario& s, const FlowState& state,
                              const MarginalTable& marginals) {
  const StageIndex stages(s.apps);
  const LoadMarginals lm = load_marginals(s, state);
  DeltaTable dt(s);
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    const Application& app = s.apps[a];
    const double L = app.packet_size(k);
    const auto& m = marginals.value[st];
    for (NodeId i = 0; i < s.node_count(); ++i) {
      auto row = dt.row(st, i);
      if (k < app.chain_length && s.has_cpu(i)) {
        row[Strategy::kCpuSlot] = app.comp_weight(i, k) * lm.cpu[i] + marginals.value[st + 1][i];
      }
      for (std::size_t q = 1; q < row.size(); ++q) {
        const LinkId l = s.graph.out_link(i, static_cast<int>(q) - 1);
        row[q] = L * lm.link[l] + m[s.graph.link(l).to];
      }
    }
  }
  return dt;
}

BlockedSets blocked_sets(const Scenario& s, const Strategy& phi, const FlowState& state,
                         const MarginalTable& marginals) {
  const StageIndex stages(s.apps);
  BlockedSets bs(s);
  std::vector<char> tagged(s.node_count());
  for (int st = 0; st < stages.size(); ++st) {
    const auto& m = marginals.value[st];
    std::fill(tagged.begin(), tagged.end(), 0);
    // Downstream first, so a node's flag already includes everything below it.
    for (NodeId p : std::views::reverse(state.order[st])) {
      const auto row = phi.row(st, p);
      for (std::size_t q = 1; q < row.size(); ++q) {
        if (row[q] == 0.0) continue;
        const NodeId j = phi.target(p, static_cast<int>(q));
        if (m[j] >= m[p] || tagged[j]) {
          tagged[p] = 1;
          break;
        }
      }
    }
    for (NodeId i = 0; i < s.node_count(); ++i) {
      const auto row = phi.row(st, i);
      auto brow = bs.row(st, i);
      for (std::size_t q = 1; q < row.size(); ++q) {
        if (row[q] != 0.0) continue;
        const NodeId j = phi.target(i, static_cast<int>(q));
        if (m[j] >= m[i] || tagged[j]) brow[q] = 1.0;
      }
    }
  }
  return bs;
}

}  // namespace sfc
