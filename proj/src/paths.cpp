#include "sfc/paths.hpp"

#include <queue>
#include <stdexcept>
#include <utility>

namespace sfc {

HopTree shortest_tree_to(const Graph& g, const std::vector<double>& link_weight,
                         const std::vector<NodeId>& targets) {
  const int n = g.node_count();
  HopTree tree{std::vector<double>(n, kInf), std::vector<NodeId>(n, -1)};
  std::vector<bool> done(n, false);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (NodeId t : targets) {
    tree.dist[t] = 0.0;
    heap.push({0.0, t});
  }
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (done[v] || d > tree.dist[v]) continue;
    done[v] = true;
    // Relax every u with a link (u, v).
    for (LinkId l : g.in_links(v)) {
      const NodeId u = g.link(l).from;
      if (done[u]) continue;
      const double w = link_weight[l];
      if (w < 0.0) throw std::invalid_argument("negative link weight");
      const double cand = d + w;
      if (cand < tree.dist[u] || (cand == tree.dist[u] && tree.next[u] >= 0 && v < tree.next[u])) {
        const bool improved = cand < tree.dist[u];
        tree.dist[u] = cand;
        tree.next[u] = v;
        if (improved) heap.push({cand, u});
      }
    }
  }
  return tree;
}

std::vector<double> zero_flow_marginals(const Scenario& s) {
  std::vector<double> w(s.graph.link_count());
  for (LinkId l = 0; l < s.graph.link_count(); ++l) w[l] = s.link_costs[l].prime(0.0);
  return w;
}

std::vector<double> hop_weights(const Graph& g) {
  return std::vector<double>(g.link_count(), 1.0);
}

}  // namespace sfc
