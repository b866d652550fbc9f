#include "sfc/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sfc/errors.hpp"
#include "sfc/flow.hpp"
#include "sfc/paths.hpp"

namespace sfc {

RowTable::RowTable(const Scenario& s, double fill)
    : stages_(StageIndex(s.apps).size()), nodes_(s.node_count()) {
  neighbors_.resize(nodes_);
  row_offset_.resize(nodes_);
  std::size_t off = 0;
  for (NodeId i = 0; i < nodes_; ++i) {
    const auto nb = s.graph.neighbors(i);
    neighbors_[i].assign(nb.begin(), nb.end());
    row_offset_[i] = off;
    off += nb.size() + 1;
  }
  stride_ = off;
  data_.assign(stride_ * stages_, fill);
}

int RowTable::slot_of(NodeId i, NodeId to) const {
  if (to == kCpu) return kCpuSlot;
  const auto& nb = neighbors_[i];
  const auto it = std::lower_bound(nb.begin(), nb.end(), to);
  if (it == nb.end() || *it != to) return -1;
  return 1 + static_cast<int>(it - nb.begin());
}

double RowTable::get(int stage, NodeId i, NodeId to, double absent) const {
  const int q = slot_of(i, to);
  return q < 0 ? absent : row(stage, i)[q];
}

void RowTable::set(int stage, NodeId i, NodeId to, double value) {
  const int q = slot_of(i, to);
  if (q < 0) {
    throw std::invalid_argument("node " + std::to_string(to) + " is not a neighbor of " +
                                std::to_string(i));
  }
  row(stage, i)[q] = value;
}

double RowTable::max_abs_diff(const RowTable& other) const {
  if (data_.size() != other.data_.size() || neighbors_ != other.neighbors_) return kInf;
  double m = 0.0;
  for (std::size_t x = 0; x < data_.size(); ++x) m = std::max(m, std::abs(data_[x] - other.data_[x]));
  return m;
}

std::vector<StrategyViolation> validate_strategy(const Scenario& s, const Strategy& phi,
                                                 double tol) {
  std::vector<StrategyViolation> out;
  const StageIndex stages(s.apps);
  if (phi.stage_count() != stages.size() || phi.node_count() != s.node_count()) {
    out.push_back({-1, -1, -1, "strategy shape does not match scenario"});
    return out;
  }
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    const Application& app = s.apps[a];
    const bool final_stage = k == app.chain_length;
    for (NodeId i = 0; i < s.node_count(); ++i) {
      const auto row = phi.row(st, i);
      double sum = 0.0;
      for (std::size_t q = 0; q < row.size(); ++q) {
        const double x = row[q];
        if (!(x >= -tol && x <= 1.0 + tol)) {
          out.push_back({i, a, k, "fraction " + std::to_string(x) + " outside [0,1]"});
        }
        sum += x;
      }
      const double want = (final_stage && i == app.destination) ? 0.0 : 1.0;
      if (std::abs(sum - want) > tol) {
        out.push_back({i, a, k, "row sums to " + std::to_string(sum) + ", expected " +
                                    std::to_string(want)});
      }
      if (row[Strategy::kCpuSlot] > tol) {
        if (final_stage) out.push_back({i, a, k, "CPU fraction at final stage"});
        if (!s.has_cpu(i)) out.push_back({i, a, k, "CPU fraction on node without CPU"});
      }
    }
  }
  return out;
}

std::optional<std::vector<NodeId>> stage_order(const Strategy& phi, int stage) {
  const int n = phi.node_count();
  std::vector<int> indeg(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    const auto row = phi.row(stage, i);
    for (std::size_t q = 1; q < row.size(); ++q) {
      if (row[q] > 0.0) ++indeg[phi.target(i, static_cast<int>(q))];
    }
  }
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    if (indeg[i] == 0) order.push_back(i);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId i = order[head];
    const auto row = phi.row(stage, i);
    for (std::size_t q = 1; q < row.size(); ++q) {
      if (row[q] > 0.0) {
        const NodeId j = phi.target(i, static_cast<int>(q));
        if (--indeg[j] == 0) order.push_back(j);
      }
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

std::vector<StageLoops> detect_loops(const Strategy& phi) {
  std::vector<StageLoops> out;
  const int n = phi.node_count();
  for (int st = 0; st < phi.stage_count(); ++st) {
    if (stage_order(phi, st)) continue;
    // Iterative DFS; every back edge closes one reported cycle.
    StageLoops loops{st, {}};
    std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<NodeId> parent(n, -1);
    for (NodeId root = 0; root < n; ++root) {
      if (color[root] != 0) continue;
      std::vector<std::pair<NodeId, std::size_t>> stack{{root, 1}};
      color[root] = 1;
      while (!stack.empty()) {
        auto& [u, q] = stack.back();
        const auto row = phi.row(st, u);
        if (q >= row.size()) {
          color[u] = 2;
          stack.pop_back();
          continue;
        }
        const std::size_t slot = q++;
        if (!(row[slot] > 0.0)) continue;
        const NodeId v = phi.target(u, static_cast<int>(slot));
        if (color[v] == 0) {
          color[v] = 1;
          parent[v] = u;
          stack.push_back({v, 1});
        } else if (color[v] == 1) {
          std::vector<NodeId> cycle{v};
          for (NodeId x = u; x != v; x = parent[x]) cycle.push_back(x);
          std::reverse(cycle.begin() + 1, cycle.end());
          loops.cycles.push_back(std::move(cycle));
        }
      }
    }
    out.push_back(std::move(loops));
  }
  return out;
}

namespace {

void check_workload_capacity(const Scenario& s) {
  double need = 0.0;
  for (const auto& app : s.apps) {
    double total_rate = 0.0;
    for (NodeId i = 0; i < s.node_count(); ++i) total_rate += s.rate(i, app.id);
    for (int k = 0; k < app.chain_length; ++k) {
      double wmin = kInf;
      for (NodeId i = 0; i < s.node_count(); ++i) {
        if (s.has_cpu(i)) wmin = std::min(wmin, app.comp_weight(i, k));
      }
      if (total_rate > 0.0 && !std::isfinite(wmin)) {
        throw NoFeasibleStrategy("application " + std::to_string(app.id) +
                                 " has tasks but the network has no CPU");
      }
      if (total_rate > 0.0) need += total_rate * wmin;
    }
  }
  double cap = 0.0;
  for (NodeId i = 0; i < s.node_count(); ++i) {
    if (s.has_cpu(i)) cap += s.comp_costs[i]->capacity();
  }
  if (need >= cap) {
    throw NoFeasibleStrategy("minimum total workload " + std::to_string(need) +
                             " exceeds total CPU capacity " + std::to_string(cap));
  }
}

std::vector<NodeId> cpu_nodes(const Scenario& s) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < s.node_count(); ++i) {
    if (s.has_cpu(i)) out.push_back(i);
  }
  return out;
}

void route_along(Strategy& phi, int st, const HopTree& tree, NodeId skip) {
  for (NodeId i = 0; i < phi.node_count(); ++i) {
    if (i == skip || tree.next[i] < 0) continue;
    phi.set(st, i, tree.next[i], 1.0);
  }
}

Strategy spread_strategy(const Scenario& s) {
  Strategy phi(s);
  const StageIndex stages(s.apps);
  for (const auto& app : s.apps) {
    const HopTree hops = shortest_tree_to(s.graph, hop_weights(s.graph), {app.destination});
    for (int k = 0; k <= app.chain_length; ++k) {
      const int st = stages.of(app.id, k);
      const bool final_stage = k == app.chain_length;
      for (NodeId i = 0; i < s.node_count(); ++i) {
        if (final_stage && i == app.destination) continue;
        std::vector<NodeId> dirs;
        if (!final_stage && s.has_cpu(i)) dirs.push_back(Strategy::kCpu);
        for (NodeId j : s.graph.neighbors(i)) {
          if (hops.dist[j] < hops.dist[i]) dirs.push_back(j);
        }
        if (dirs.empty()) throw NoFeasibleStrategy("spread strategy has an empty row");
        for (NodeId j : dirs) phi.set(st, i, j, 1.0 / static_cast<double>(dirs.size()));
      }
    }
  }
  return phi;
}

bool finite_cost(const Scenario& s, const Strategy& phi) {
  try {
    return std::isfinite(compute_flows(s, phi).total_cost);
  } catch (const CapacityExceeded&) {
    return false;
  } catch (const LoopDetected&) {
    return false;
  }
}

}  // namespace

Strategy shortest_path_strategy(const Scenario& s, InitMode mode) {
  Strategy phi(s);
  const StageIndex stages(s.apps);
  const std::vector<double> w = zero_flow_marginals(s);
  const std::vector<NodeId> cpus = cpu_nodes(s);
  const HopTree to_cpu = shortest_tree_to(s.graph, w, cpus);

  for (const auto& app : s.apps) {
    const NodeId d = app.destination;
    const HopTree to_dest = shortest_tree_to(s.graph, w, {d});
    route_along(phi, stages.of(app.id, app.chain_length), to_dest, d);
    if (app.chain_length == 0) continue;
    if (cpus.empty()) throw NoFeasibleStrategy("no node has a CPU");

    if (mode == InitMode::LocalComputation) {
      for (int k = 0; k < app.chain_length; ++k) {
        const int st = stages.of(app.id, k);
        for (NodeId i = 0; i < s.node_count(); ++i) {
          if (s.has_cpu(i)) {
            phi.set(st, i, Strategy::kCpu, 1.0);
          } else {
            phi.set(st, i, to_cpu.next[i], 1.0);
          }
        }
      }
    } else {
      NodeId site = d;
      while (!s.has_cpu(site)) site = to_cpu.next[site];
      const HopTree to_site = shortest_tree_to(s.graph, w, {site});
      for (int k = 0; k < app.chain_length; ++k) {
        const int st = stages.of(app.id, k);
        route_along(phi, st, to_site, site);
        phi.set(st, site, Strategy::kCpu, 1.0);
      }
    }
  }
  return phi;
}

Strategy init_strategy(const Scenario& s, InitMode mode) {
  check_workload_capacity(s);
  const InitMode other =
      mode == InitMode::LocalComputation ? InitMode::ComputeAtDestination : InitMode::LocalComputation;
  for (InitMode m : {mode, other}) {
    Strategy phi = shortest_path_strategy(s, m);
    if (finite_cost(s, phi)) return phi;
  }
  if (cpu_nodes(s).size() == static_cast<std::size_t>(s.node_count())) {
    Strategy phi = spread_strategy(s);
    if (finite_cost(s, phi)) return phi;
  }
  throw NoFeasibleStrategy("no shortest-path initial strategy has finite cost");
}

}  // namespace sfc
