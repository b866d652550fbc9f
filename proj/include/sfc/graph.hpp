#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sfc {

using NodeId = int;
using LinkId = int;

struct Link {
  NodeId from;
  NodeId to;
  bool operator==(const Link&) const = default;
};

// An undirected edge as read from a topology description. `capacity` is an
// optional per-edge hint (<= 0 means none).
struct Edge {
  NodeId u;
  NodeId v;
  double capacity = 0.0;
};

// Directed, strongly connected graph whose links always come in pairs
// (i,j)/(j,i). Neighbor lists are sorted ascending; forwarding rows index
// neighbors by their position in that list.
class Graph {
 public:
  Graph() = default;
  // Throws TopologyError on self-links, out-of-range ids or a disconnected
  // edge set. Duplicate edges are merged.
  Graph(int node_count, const std::vector<Edge>& edges,
        std::vector<std::string> names = {});

  int node_count() const { return static_cast<int>(neighbors_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  int undirected_edge_count() const { return link_count() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const { return neighbors_[i]; }
  int degree(NodeId i) const { return static_cast<int>(neighbors_[i].size()); }
  // Link id of (i, neighbors(i)[q]).
  LinkId out_link(NodeId i, int q) const { return out_links_[i][q]; }
  // Link ids (l, j) for every neighbor l of j.
  std::span<const LinkId> in_links(NodeId j) const { return in_links_[j]; }
  const Link& link(LinkId id) const { return links_[id]; }
  const std::vector<Link>& links() const { return links_; }

  // -1 when (i, j) is not a link.
  LinkId link_id(NodeId i, NodeId j) const;
  bool has_link(NodeId i, NodeId j) const { return link_id(i, j) >= 0; }
  // Position of j in neighbors(i), or -1.
  int neighbor_index(NodeId i, NodeId j) const;
  LinkId reverse(LinkId id) const;

  double capacity_hint(LinkId id) const { return capacity_hint_[id]; }
  const std::string& name(NodeId i) const { return names_[i]; }
  std::optional<NodeId> find(const std::string& name) const;

  // Undirected edge list (u < v), in link order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<std::vector<LinkId>> out_links_;
  std::vector<std::vector<LinkId>> in_links_;
  std::vector<Link> links_;
  std::vector<double> capacity_hint_;
  std::vector<std::string> names_;
};

bool is_connected(int node_count, const std::vector<Edge>& edges);

}  // namespace sfc
