#include "sfc/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

#include "sfc/errors.hpp"

namespace sfc {

bool is_connected(int node_count, const std::vector<Edge>& edges) {
  if (node_count <= 1) return true;
  std::vector<std::vector<NodeId>> adj(node_count);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(node_count, false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == node_count;
}

Graph::Graph(int node_count, const std::vector<Edge>& edges,
             std::vector<std::string> names) {
  if (node_count < 1) throw TopologyError("graph needs at least one node");
  if (names.empty()) {
    names.resize(node_count);
    for (int i = 0; i < node_count; ++i) names[i] = std::to_string(i);
  }
  if (static_cast<int>(names.size()) != node_count) {
    throw TopologyError("node name count does not match node count");
  }
  names_ = std::move(names);

  // Canonical undirected edges, deduplicated; first capacity hint wins.
  std::map<std::pair<NodeId, NodeId>, double> canon;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count) {
      throw TopologyError("edge endpoint out of range");
    }
    if (e.u == e.v) throw TopologyError("self-link on node " + std::to_string(e.u));
    canon.try_emplace({std::min(e.u, e.v), std::max(e.u, e.v)}, e.capacity);
  }
  std::vector<Edge> unique_edges;
  for (const auto& [key, cap] : canon) unique_edges.push_back({key.first, key.second, cap});
  if (!is_connected(node_count, unique_edges)) {
    throw TopologyError("graph is not connected");
  }

  neighbors_.assign(node_count, {});
  for (const auto& e : unique_edges) {
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

  out_links_.assign(node_count, {});
  in_links_.assign(node_count, {});
  for (NodeId i = 0; i < node_count; ++i) {
    for (NodeId j : neighbors_[i]) {
      const LinkId id = static_cast<LinkId>(links_.size());
      links_.push_back({i, j});
      const auto it = canon.find({std::min(i, j), std::max(i, j)});
      capacity_hint_.push_back(it->second);
      out_links_[i].push_back(id);
      in_links_[j].push_back(id);
    }
  }
}

LinkId Graph::link_id(NodeId i, NodeId j) const {
  const int q = neighbor_index(i, j);
  return q < 0 ? -1 : out_links_[i][q];
}

int Graph::neighbor_index(NodeId i, NodeId j) const {
  if (i < 0 || i >= node_count()) return -1;
  const auto& nb = neighbors_[i];
  const auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return -1;
  return static_cast<int>(it - nb.begin());
}

LinkId Graph::reverse(LinkId id) const {
  return link_id(links_[id].to, links_[id].from);
}

std::optional<NodeId> Graph::find(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (LinkId id = 0; id < link_count(); ++id) {
    const auto& l = links_[id];
    if (l.from < l.to) out.push_back({l.from, l.to, capacity_hint_[id]});
  }
  return out;
}

}  // namespace sfc
