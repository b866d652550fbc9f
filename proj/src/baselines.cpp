#include "sfc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sfc/errors.hpp"
#include "sfc/paths.hpp"

namespace sfc {

namespace {

// Nodes ordered so that every node precedes its next hop.
std::vector<NodeId> leaves_first(const HopTree& tree) {
  const int n = static_cast<int>(tree.next.size());
  std::vector<int> depth(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId v = i; tree.next[v] >= 0; v = tree.next[v]) ++depth[i];
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return depth[a] > depth[b]; });
  return order;
}

void route_to(Strategy& phi, int stage, const HopTree& tree, NodeId target) {
  for (NodeId i = 0; i < static_cast<NodeId>(tree.next.size()); ++i) {
    if (i != target) phi.set(stage, i, tree.next[i], 1.0);
  }
}

double cpu_prime0(const Scenario& s, NodeId i) { return s.has_cpu(i) ? s.comp_costs[i]->prime(0.0) : kInf; }

BaselineResult evaluate(std::string name, const Scenario& s, Strategy phi) {
  BaselineResult r{std::move(name), std::move(phi), {}, true};
  try {
    r.state = compute_flows(s, r.strategy);
  } catch (const CapacityExceeded&) {
    r.feasible = false;
    r.state.total_cost = kInf;
  }
  return r;
}

// SPOC state of one application: the tree and CPU fractions x[k][i].
struct SpocApp {
  const Application* app;
  HopTree tree;
  std::vector<NodeId> order;
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> traffic;
};

// Link and CPU loads contributed by one application.
void spoc_loads(const Scenario& s, SpocApp& a, std::vector<double>& F, std::vector<double>& G) {
  const Application& app = *a.app;
  const int n = s.node_count();
  a.traffic.assign(app.chain_length + 1, std::vector<double>(n, 0.0));
  for (NodeId i = 0; i < n; ++i) a.traffic[0][i] = s.rate(i, app.id);
  for (int k = 0; k <= app.chain_length; ++k) {
    for (NodeId i : a.order) {
      const double t = a.traffic[k][i];
      if (t == 0.0) continue;
      double forward = t;
      if (k < app.chain_length) {
        const double g = a.x[k][i] * t;
        G[i] += app.comp_weight(i, k) * g;
        a.traffic[k + 1][i] += g;
        forward = t - g;
      }
      const NodeId j = a.tree.next[i];
      if (j < 0 || forward == 0.0) continue;
      F[s.graph.link_id(i, j)] += app.packet_size(k) * forward;
      a.traffic[k][j] += forward;
    }
  }
}

bool loads_feasible(const Scenario& s, const std::vector<double>& F, const std::vector<double>& G) {
  for (LinkId l = 0; l < s.graph.link_count(); ++l) {
    if (!s.link_costs[l].in_domain(F[l])) return false;
  }
  for (NodeId i = 0; i < s.node_count(); ++i) {
    if (s.has_cpu(i) ? !s.comp_costs[i]->in_domain(G[i]) : G[i] > 0.0) return false;
  }
  return true;
}

double spoc_total(const Scenario& s, std::vector<SpocApp>& apps) {
  std::vector<double> F(s.graph.link_count(), 0.0), G(s.node_count(), 0.0);
  for (auto& a : apps) spoc_loads(s, a, F, G);
  if (!loads_feasible(s, F, G)) return kInf;
  return total_cost(s, F, G);
}

// Exact minimizer over [0, 1] of the convex T(x0 + (x - x0)) along the load
// direction (dF, dG) at loads (F, G) taken at x0.
double spoc_line_search(const Scenario& s, const std::vector<double>& F, const std::vector<double>& G,
                        const std::vector<std::pair<LinkId, double>>& dF,
                        const std::vector<std::pair<NodeId, double>>& dG, double x0) {
  double lo = 0.0, hi = 1.0;
  auto bound = [&](double load, double cap, double d) {
    if (d > 0.0) hi = std::min(hi, x0 + (cap - load) / d);
    if (d < 0.0) lo = std::max(lo, x0 + (cap - load) / d);
  };
  for (const auto& [l, d] : dF) bound(F[l], s.link_costs[l].capacity(), d);
  for (const auto& [i, d] : dG) bound(G[i], s.comp_costs[i]->capacity(), d);
  auto slope = [&](double x) {
    double v = 0.0;
    for (const auto& [l, d] : dF) v += d * s.link_costs[l].prime(F[l] + (x - x0) * d);
    for (const auto& [i, d] : dG) v += d * s.comp_costs[i]->prime(G[i] + (x - x0) * d);
    return v;
  };
  auto inside = [&](double x) {
    try {
      slope(x);
      return true;
    } catch (const CapacityExceeded&) {
      return false;
    }
  };
  while (hi > x0 && !inside(hi)) hi = x0 + (hi - x0) * (1 - 1e-9);
  while (lo < x0 && !inside(lo)) lo = x0 + (lo - x0) * (1 - 1e-9);
  if (slope(lo) >= 0.0) return lo;
  if (slope(hi) <= 0.0) return hi;
  for (int n = 0; n < 100 && hi - lo > 1e-15; ++n) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BaselineResult spoc(const Scenario& s, double tol) {
  const StageIndex stages(s.apps);
  const std::vector<double> w = zero_flow_marginals(s);
  const int n = s.node_count();
  std::vector<SpocApp> apps;
  for (const auto& app : s.apps) {
    if (app.chain_length > 0 && !s.has_cpu(app.destination)) {
      throw NoFeasibleStrategy("destination " + s.graph.name(app.destination) + " has no CPU");
    }
    SpocApp a{&app, shortest_tree_to(s.graph, w, {app.destination}), {}, {}, {}};
    a.order = leaves_first(a.tree);
    apps.push_back(std::move(a));
  }

  // Candidate starts: compute at the first CPU on the path, at the
  // destination, or spread evenly over the CPUs left on the path.
  double best = kInf;
  std::vector<std::vector<std::vector<double>>> best_x;
  for (int mode = 0; mode < 3; ++mode) {
    for (auto& a : apps) {
      a.x.assign(a.app->chain_length, std::vector<double>(n, 0.0));
      for (NodeId i = 0; i < n; ++i) {
        int left = 0;
        for (NodeId v = i; v >= 0; v = a.tree.next[v]) left += s.has_cpu(v) ? 1 : 0;
        for (int k = 0; k < a.app->chain_length; ++k) {
          if (!s.has_cpu(i)) continue;
          if (i == a.app->destination || mode == 0) {
            a.x[k][i] = 1.0;
          } else if (mode == 2) {
            a.x[k][i] = 1.0 / left;
          }
        }
      }
    }
    const double T = spoc_total(s, apps);
    if (T < best) {
      best = T;
      best_x.clear();
      for (const auto& a : apps) best_x.push_back(a.x);
    }
  }
  if (!std::isfinite(best)) throw NoFeasibleStrategy("every shortest-path placement saturates a resource");
  for (std::size_t q = 0; q < apps.size(); ++q) apps[q].x = best_x[q];

  std::vector<double> F, G;
  auto refresh = [&] {
    F.assign(s.graph.link_count(), 0.0);
    G.assign(n, 0.0);
    for (auto& a : apps) spoc_loads(s, a, F, G);
  };
  refresh();
  std::vector<double> F0, G0, F1, G1;
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double moved = 0.0;
    for (auto& a : apps) {
      for (int k = 0; k < a.app->chain_length; ++k) {
        for (NodeId i = 0; i < n; ++i) {
          if (!s.has_cpu(i) || i == a.app->destination || !(a.traffic[k][i] > 0.0)) continue;
          const double x0 = a.x[k][i];
          F0.assign(F.size(), 0.0);
          G0.assign(G.size(), 0.0);
          F1 = F0;
          G1 = G0;
          a.x[k][i] = 0.0;
          spoc_loads(s, a, F0, G0);
          a.x[k][i] = 1.0;
          spoc_loads(s, a, F1, G1);
          std::vector<std::pair<LinkId, double>> dF;
          std::vector<std::pair<NodeId, double>> dG;
          for (LinkId l = 0; l < static_cast<LinkId>(F.size()); ++l) {
            if (F1[l] != F0[l]) dF.push_back({l, F1[l] - F0[l]});
          }
          for (NodeId v = 0; v < n; ++v) {
            if (G1[v] != G0[v]) dG.push_back({v, G1[v] - G0[v]});
          }
          const double x = spoc_line_search(s, F, G, dF, dG, x0);
          a.x[k][i] = x;
          for (const auto& [l, d] : dF) F[l] += (x - x0) * d;
          for (const auto& [v, d] : dG) G[v] += (x - x0) * d;
          spoc_loads(s, a, F0, G0);  // refreshes a.traffic for the new x
          moved = std::max(moved, std::abs(x - x0));
        }
      }
    }
    refresh();
    if (moved <= tol) break;
  }

  Strategy phi(s);
  for (const auto& a : apps) {
    const Application& app = *a.app;
    for (int k = 0; k <= app.chain_length; ++k) {
      const int st = stages.of(app.id, k);
      for (NodeId i = 0; i < n; ++i) {
        if (i == app.destination) {
          if (k < app.chain_length) phi.set(st, i, Strategy::kCpu, 1.0);
          continue;
        }
        const double x = k < app.chain_length ? a.x[k][i] : 0.0;
        if (x > 0.0) phi.set(st, i, Strategy::kCpu, x);
        if (x < 1.0) phi.set(st, i, a.tree.next[i], 1.0 - x);
      }
    }
  }
  return evaluate("SPOC", s, std::move(phi));
}

BaselineResult lcof(const Scenario& s, const GpConfig& config) {
  const StageIndex stages(s.apps);
  const std::vector<double> w = zero_flow_marginals(s);
  std::vector<double> G(s.node_count(), 0.0);
  for (const auto& app : s.apps) {
    for (NodeId i = 0; i < s.node_count(); ++i) {
      if (!(s.rate(i, app.id) > 0.0) || app.chain_length == 0) continue;
      if (!s.has_cpu(i)) {
        throw LocalComputationInfeasible("source " + s.graph.name(i) + " has no CPU");
      }
      for (int k = 0; k < app.chain_length; ++k) G[i] += app.comp_weight(i, k) * s.rate(i, app.id);
    }
  }
  for (NodeId i = 0; i < s.node_count(); ++i) {
    if (G[i] > 0.0 && !s.comp_costs[i]->in_domain(G[i])) {
      throw LocalComputationInfeasible("local workload saturates the CPU at " + s.graph.name(i));
    }
  }

  std::vector<NodeId> cpus;
  for (NodeId i = 0; i < s.node_count(); ++i) {
    if (s.has_cpu(i)) cpus.push_back(i);
  }
  const HopTree to_cpu = shortest_tree_to(s.graph, w, cpus);
  Strategy phi(s);
  for (const auto& app : s.apps) {
    for (int k = 0; k < app.chain_length; ++k) {
      const int st = stages.of(app.id, k);
      for (NodeId i = 0; i < s.node_count(); ++i) {
        phi.set(st, i, s.has_cpu(i) ? Strategy::kCpu : to_cpu.next[i], 1.0);
      }
    }
    route_to(phi, stages.of(app.id, app.chain_length), shortest_tree_to(s.graph, w, {app.destination}),
             app.destination);
  }

  try {
    compute_flows(s, phi);
  } catch (const CapacityExceeded&) {
    // Result routing alone saturates a link: split over all neighbors
    // closer to the destination instead.
    for (const auto& app : s.apps) {
      const HopTree hops = shortest_tree_to(s.graph, hop_weights(s.graph), {app.destination});
      const int st = stages.of(app.id, app.chain_length);
      for (NodeId i = 0; i < s.node_count(); ++i) {
        if (i == app.destination) continue;
        auto row = phi.row(st, i);
        std::fill(row.begin(), row.end(), 0.0);
        std::vector<NodeId> closer;
        for (NodeId j : s.graph.neighbors(i)) {
          if (hops.dist[j] < hops.dist[i]) closer.push_back(j);
        }
        for (NodeId j : closer) phi.set(st, i, j, 1.0 / static_cast<double>(closer.size()));
      }
    }
    try {
      compute_flows(s, phi);
    } catch (const CapacityExceeded& e) {
      throw NoFeasibleStrategy(std::string("no finite-cost result routing: ") + e.what());
    }
  }

  GpConfig cfg = config;
  cfg.row_filter = [&](int st, NodeId) { return stages.is_final(st, s.apps); };
  GpResult r = run_gp(s, phi, cfg);
  return {"LCOF", std::move(r.strategy), std::move(r.state), true};
}

BaselineResult lpr_sc(const Scenario& s) {
  const StageIndex stages(s.apps);
  const std::vector<double> w = zero_flow_marginals(s);
  const int n = s.node_count();
  std::vector<HopTree> to(n);
  for (NodeId c = 0; c < n; ++c) to[c] = shortest_tree_to(s.graph, w, {c});

  Strategy phi(s);
  for (const auto& app : s.apps) {
    const int K = app.chain_length;
    std::vector<NodeId> site(K);
    if (K > 0) {
      // cost[k][c]: cheapest estimate with task k placed at c; from[k][c]
      // is the site of task k - 1.
      std::vector<std::vector<double>> cost(K, std::vector<double>(n, kInf));
      std::vector<std::vector<NodeId>> from(K, std::vector<NodeId>(n, -1));
      double total_rate = 0.0;
      for (NodeId i = 0; i < n; ++i) total_rate += s.rate(i, app.id);
      for (NodeId c = 0; c < n; ++c) {
        if (!s.has_cpu(c)) continue;
        double data = 0.0;
        for (NodeId i = 0; i < n; ++i) {
          if (s.rate(i, app.id) > 0.0) data += s.rate(i, app.id) * app.packet_size(0) * to[c].dist[i];
        }
        cost[0][c] = data + total_rate * app.comp_weight(c, 0) * cpu_prime0(s, c);
      }
      for (int k = 1; k < K; ++k) {
        for (NodeId c = 0; c < n; ++c) {
          if (!s.has_cpu(c)) continue;
          for (NodeId p = 0; p < n; ++p) {
            const double v = cost[k - 1][p] + total_rate * app.packet_size(k) * to[c].dist[p];
            if (v < cost[k][c]) {
              cost[k][c] = v;
              from[k][c] = p;
            }
          }
          cost[k][c] += total_rate * app.comp_weight(c, k) * cpu_prime0(s, c);
        }
      }
      const auto last = std::min_element(cost[K - 1].begin(), cost[K - 1].end());
      if (!std::isfinite(*last)) throw NoFeasibleStrategy("no node has a CPU");
      site[K - 1] = static_cast<NodeId>(last - cost[K - 1].begin());
      for (int k = K - 1; k > 0; --k) site[k - 1] = from[k][site[k]];
    }
    for (int k = 0; k <= K; ++k) {
      const NodeId target = k < K ? site[k] : app.destination;
      const int st = stages.of(app.id, k);
      route_to(phi, st, to[target], target);
      if (k < K) phi.set(st, target, Strategy::kCpu, 1.0);
    }
  }
  return evaluate("LPR-SC", s, std::move(phi));
}

}  // namespace sfc
