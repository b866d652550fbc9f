#include "sfc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

#include "sfc/errors.hpp"

namespace sfc {

namespace {

using Coefs = std::vector<std::pair<int, double>>;

// Sorted, merged sparse vector.
Coefs merged(Coefs v) {
  std::sort(v.begin(), v.end());
  Coefs out;
  for (const auto& [id, c] : v) {
    if (!out.empty() && out.back().first == id) {
      out.back().second += c;
    } else {
      out.push_back({id, c});
    }
  }
  return out;
}

// a - b for sorted sparse vectors.
Coefs difference(const Coefs& a, const Coefs& b) {
  Coefs out;
  std::size_t x = 0, y = 0;
  while (x < a.size() || y < b.size()) {
    if (y == b.size() || (x < a.size() && a[x].first < b[y].first)) {
      out.push_back(a[x++]);
    } else if (x == a.size() || b[y].first < a[x].first) {
      out.push_back({b[y].first, -b[y].second});
      ++y;
    } else {
      const double c = a[x].second - b[y].second;
      if (c != 0.0) out.push_back({a[x].first, c});
      ++x;
      ++y;
    }
  }
  return out;
}

// Load coefficients of one unit of flow on an extended path.
struct PathData {
  ExtendedPath path;
  Coefs link;  // link -> bits per packet
  Coefs cpu;   // node -> workload per packet
  std::vector<std::pair<int, LinkId>> hops;     // (stage, link)
  std::vector<std::pair<int, NodeId>> computes;  // (stage, node)
};

PathData path_data(const Scenario& s, const StageIndex& stages, ExtendedPath p) {
  PathData d;
  const Application& app = s.apps[p.app];
  int k = 0;
  for (std::size_t x = 0; x + 1 < p.nodes.size(); ++x) {
    const NodeId u = p.nodes[x], v = p.nodes[x + 1];
    const int st = stages.of(p.app, k);
    if (u == v) {
      d.cpu.push_back({u, app.comp_weight(u, k)});
      d.computes.push_back({st, u});
      ++k;
    } else {
      const LinkId l = s.graph.link_id(u, v);
      d.link.push_back({l, app.packet_size(k)});
      d.hops.push_back({st, l});
    }
  }
  d.link = merged(std::move(d.link));
  d.cpu = merged(std::move(d.cpu));
  d.path = std::move(p);
  return d;
}

struct Commodity {
  int app;
  NodeId source;
  double rate;
  std::vector<int> paths;  // indices into the path pool
  std::vector<double> flow;
};

// Aggregate loads with cost helpers.
struct Loads {
  const Scenario* s;
  std::vector<double> F, G;

  explicit Loads(const Scenario& sc) : s(&sc), F(sc.graph.link_count(), 0.0), G(sc.node_count(), 0.0) {}

  void add(const PathData& p, double x) {
    for (const auto& [l, c] : p.link) F[l] += c * x;
    for (const auto& [i, c] : p.cpu) G[i] += c * x;
  }
  double link_prime(LinkId l) const { return s->link_costs[l].prime(F[l]); }
  double cpu_prime(NodeId i) const {
    if (!s->has_cpu(i)) {
      if (G[i] > 0.0) throw CapacityExceeded("workload on node without CPU");
      return kInf;
    }
    return s->comp_costs[i]->prime(G[i]);
  }
  double path_cost(const PathData& p) const {
    double c = 0.0;
    for (const auto& [l, a] : p.link) c += a * link_prime(l);
    for (const auto& [i, a] : p.cpu) c += a * cpu_prime(i);
    return c;
  }
  bool feasible() const {
    for (LinkId l = 0; l < s->graph.link_count(); ++l) {
      if (!s->link_costs[l].in_domain(F[l])) return false;
    }
    for (NodeId i = 0; i < s->node_count(); ++i) {
      if (s->has_cpu(i) ? !s->comp_costs[i]->in_domain(G[i]) : G[i] > 0.0) return false;
    }
    return true;
  }
  double total() const { return total_cost(*s, F, G); }
};

// Exact minimization of T(loads + step * (q - p)) over [0, xmax].
double line_search(const Scenario& s, const Loads& loads, const Coefs& dl, const Coefs& dg, double xmax) {
  double hi = xmax;
  for (const auto& [l, d] : dl) {
    if (d > 0.0) hi = std::min(hi, (s.link_costs[l].capacity() - loads.F[l]) / d);
  }
  for (const auto& [i, d] : dg) {
    if (d > 0.0) hi = std::min(hi, (s.comp_costs[i]->capacity() - loads.G[i]) / d);
  }
  const bool clipped = hi < xmax;
  auto slope = [&](double t) {
    double v = 0.0;
    for (const auto& [l, d] : dl) v += d * s.link_costs[l].prime(loads.F[l] + t * d);
    for (const auto& [i, d] : dg) v += d * s.comp_costs[i]->prime(loads.G[i] + t * d);
    return v;
  };
  if (!clipped && slope(xmax) <= 0.0) return xmax;
  double lo = 0.0;
  if (clipped) hi = std::nextafter(hi, 0.0);
  // Keep hi strictly inside the domain.
  while (hi > lo) {
    try {
      slope(hi);
      break;
    } catch (const CapacityExceeded&) {
      hi = lo + (hi - lo) * (1 - 1e-12);
    }
  }
  for (int n = 0; n < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++n) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

// Cost-to-go on the layered graph of one application: index k * n + i,
// target (K, d). next = -1 at the target.
struct LayeredTree {
  std::vector<double> dist;
  std::vector<int> next;
};

LayeredTree layered_tree(const Scenario& s, const Application& app,
                         const std::vector<double>& link_w, const std::vector<double>& cpu_w) {
  const int n = s.node_count();
  const int K = app.chain_length;
  LayeredTree t;
  t.dist.assign((K + 1) * n, kInf);
  t.next.assign((K + 1) * n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int target = K * n + app.destination;
  t.dist[target] = 0.0;
  pq.push({0.0, target});
  std::vector<char> done((K + 1) * n, 0);
  auto relax = [&](int from, int to, double w) {
    if (!std::isfinite(w)) return;
    const double d = t.dist[to] + w;
    if (d < t.dist[from] || (d == t.dist[from] && t.next[from] >= 0 && to < t.next[from])) {
      t.dist[from] = d;
      t.next[from] = to;
      pq.push({d, from});
    }
  };
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (done[v] || d > t.dist[v]) continue;
    done[v] = 1;
    const int k = v / n;
    const NodeId j = v % n;
    for (LinkId l : s.graph.in_links(j)) {
      const NodeId i = s.graph.link(l).from;
      if (!done[k * n + i]) relax(k * n + i, v, app.packet_size(k) * link_w[l]);
    }
    if (k > 0 && s.has_cpu(j) && !done[(k - 1) * n + j]) {
      relax((k - 1) * n + j, v, app.comp_weight(j, k - 1) * cpu_w[j]);
    }
  }
  return t;
}

ExtendedPath tree_path(const Scenario& s, const LayeredTree& t, int app, NodeId source) {
  const int n = s.node_count();
  ExtendedPath p{app, source, {source}};
  for (int v = source; t.next[v] >= 0; v = t.next[v]) p.nodes.push_back(t.next[v] % n);
  return p;
}

std::vector<Commodity> commodities(const Scenario& s) {
  std::vector<Commodity> out;
  for (const auto& app : s.apps) {
    for (NodeId i = 0; i < s.node_count(); ++i) {
      if (s.rate(i, app.id) > 0.0) out.push_back({app.id, i, s.rate(i, app.id), {}, {}});
    }
  }
  return out;
}

std::vector<double> link_marginals(const Loads& loads) {
  std::vector<double> w(loads.F.size());
  for (LinkId l = 0; l < static_cast<LinkId>(w.size()); ++l) w[l] = loads.link_prime(l);
  return w;
}

std::vector<double> cpu_marginals(const Loads& loads) {
  std::vector<double> w(loads.G.size());
  for (NodeId i = 0; i < static_cast<NodeId>(w.size()); ++i) w[i] = loads.cpu_prime(i);
  return w;
}

FlowVector flows_from_paths(const Scenario& s, const std::vector<PathData>& pool,
                            const std::vector<Commodity>& cs) {
  const StageIndex stages(s.apps);
  FlowVector f;
  f.link_flow.assign(stages.size(), std::vector<double>(s.graph.link_count(), 0.0));
  f.cpu_flow.assign(stages.size(), std::vector<double>(s.node_count(), 0.0));
  for (const auto& c : cs) {
    for (std::size_t x = 0; x < c.paths.size(); ++x) {
      const PathData& p = pool[c.paths[x]];
      for (const auto& [st, l] : p.hops) f.link_flow[st][l] += c.flow[x];
      for (const auto& [st, i] : p.computes) f.cpu_flow[st][i] += c.flow[x];
    }
  }
  return f;
}

}  // namespace

FlowVector flows_of(const FlowState& state) { return {state.link_flow, state.cpu_flow}; }

double flow_cost(const Scenario& s, const FlowVector& f) {
  const StageIndex stages(s.apps);
  std::vector<double> F(s.graph.link_count(), 0.0), G(s.node_count(), 0.0);
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    const Application& app = s.apps[a];
    for (LinkId l = 0; l < s.graph.link_count(); ++l) F[l] += app.packet_size(k) * f.link_flow[st][l];
    if (k < app.chain_length) {
      for (NodeId i = 0; i < s.node_count(); ++i) G[i] += app.comp_weight(i, k) * f.cpu_flow[st][i];
    }
  }
  return total_cost(s, F, G);
}

double conservation_error(const Scenario& s, const FlowVector& f) {
  const StageIndex stages(s.apps);
  double worst = 0.0;
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    const Application& app = s.apps[a];
    for (NodeId i = 0; i < s.node_count(); ++i) {
      double in = k == 0 ? s.rate(i, a) : f.cpu_flow[st - 1][i];
      for (LinkId l : s.graph.in_links(i)) in += f.link_flow[st][l];
      double out = f.cpu_flow[st][i];
      for (int q = 0; q < s.graph.degree(i); ++q) out += f.link_flow[st][s.graph.out_link(i, q)];
      if (k == app.chain_length && i == app.destination) {
        worst = std::max(worst, std::abs(f.cpu_flow[st][i]));
        for (int q = 0; q < s.graph.degree(i); ++q) {
          worst = std::max(worst, std::abs(f.link_flow[st][s.graph.out_link(i, q)]));
        }
      } else {
        worst = std::max(worst, std::abs(in - out));
      }
    }
  }
  return worst;
}

OracleResult solve_flow_domain(const Scenario& s, const OracleConfig& config) {
  const StageIndex stages(s.apps);
  std::vector<Commodity> cs = commodities(s);
  std::vector<PathData> pool;
  Loads loads(s);

  auto find_or_add = [&](Commodity& c, ExtendedPath p) {
    for (std::size_t x = 0; x < c.paths.size(); ++x) {
      if (pool[c.paths[x]].path.nodes == p.nodes) return x;
    }
    pool.push_back(path_data(s, stages, std::move(p)));
    c.paths.push_back(static_cast<int>(pool.size()) - 1);
    c.flow.push_back(0.0);
    return c.paths.size() - 1;
  };

  // Incremental loading: every commodity is added in slices, each slice on
  // the cheapest extended path under the current marginals.
  constexpr int kSlices = 32;
  for (int n = 0; n < kSlices; ++n) {
    for (auto& c : cs) {
      double chunk = c.rate / kSlices;
      int depth = 0;
      double placed = 0.0;
      while (placed < c.rate / kSlices) {
        const auto tree = layered_tree(s, s.apps[c.app], link_marginals(loads), cpu_marginals(loads));
        if (!std::isfinite(tree.dist[c.source])) {
          throw NoFeasibleStrategy("no finite-cost extended path for application " + std::to_string(c.app));
        }
        const std::size_t x = find_or_add(c, tree_path(s, tree, c.app, c.source));
        const double amount = std::min(chunk, c.rate / kSlices - placed);
        loads.add(pool[c.paths[x]], amount);
        if (loads.feasible()) {
          c.flow[x] += amount;
          placed += amount;
        } else {
          loads.add(pool[c.paths[x]], -amount);
          chunk /= 2;
          if (++depth > 30) throw NoFeasibleStrategy("incremental loading saturates every path");
        }
      }
    }
  }

  OracleResult res;
  for (int it = 0;; ++it) {
    const auto lw = link_marginals(loads);
    const auto gw = cpu_marginals(loads);
    std::vector<LayeredTree> trees;
    for (const auto& app : s.apps) trees.push_back(layered_tree(s, app, lw, gw));

    const double T = loads.total();
    double gap = 0.0;
    for (const auto& c : cs) {
      double used = 0.0;
      for (std::size_t x = 0; x < c.paths.size(); ++x) {
        if (c.flow[x] > 0.0) used += c.flow[x] * loads.path_cost(pool[c.paths[x]]);
      }
      gap += used - c.rate * trees[c.app].dist[c.source];
    }
    gap = std::max(gap, 0.0);
    res.gap_history.push_back(gap);
    res.cost_history.push_back(T);
    res.iterations = it;
    res.gap = gap;
    if (gap <= config.tol * std::max(1.0, T)) break;
    if (it >= config.max_iters) {
      throw NotConverged("flow-domain solver stopped with gap " + std::to_string(gap));
    }

    for (auto& c : cs) {
      find_or_add(c, tree_path(s, trees[c.app], c.app, c.source));
      std::vector<double> cost(c.paths.size());
      for (std::size_t x = 0; x < c.paths.size(); ++x) cost[x] = loads.path_cost(pool[c.paths[x]]);
      const std::size_t q = std::min_element(cost.begin(), cost.end()) - cost.begin();
      for (std::size_t x = 0; x < c.paths.size(); ++x) {
        if (x == q || c.flow[x] <= 0.0 || !(loads.path_cost(pool[c.paths[x]]) > loads.path_cost(pool[c.paths[q]]))) {
          continue;
        }
        const PathData& from = pool[c.paths[x]];
        const PathData& to = pool[c.paths[q]];
        const Coefs dl = difference(to.link, from.link);
        const Coefs dg = difference(to.cpu, from.cpu);
        const double step = line_search(s, loads, dl, dg, c.flow[x]);
        if (step <= 0.0) continue;
        for (const auto& [l, d] : dl) loads.F[l] += step * d;
        for (const auto& [i, d] : dg) loads.G[i] += step * d;
        if (step >= c.flow[x]) {
          c.flow[q] += c.flow[x];
          c.flow[x] = 0.0;
        } else {
          c.flow[x] -= step;
          c.flow[q] += step;
        }
      }
    }
    // Rebuild loads from path flows to keep rounding from drifting.
    Loads fresh(s);
    for (const auto& c : cs) {
      for (std::size_t x = 0; x < c.paths.size(); ++x) {
        if (c.flow[x] > 0.0) fresh.add(pool[c.paths[x]], c.flow[x]);
      }
    }
    loads = std::move(fresh);
  }

  res.total_cost = loads.total();
  res.flows = flows_from_paths(s, pool, cs);
  for (const auto& c : cs) {
    for (std::size_t x = 0; x < c.paths.size(); ++x) {
      if (c.flow[x] > 0.0) {
        res.paths.push_back(pool[c.paths[x]].path);
        res.path_flow.push_back(c.flow[x]);
      }
    }
  }
  return res;
}

std::vector<ExtendedPath> enumerate_paths(const Scenario& s, int limit) {
  std::vector<ExtendedPath> out;
  for (const auto& app : s.apps) {
    for (NodeId src = 0; src < s.node_count(); ++src) {
      if (!(s.rate(src, app.id) > 0.0)) continue;
      std::vector<NodeId> walk{src};
      std::vector<char> seen(s.node_count(), 0);
      std::function<void(NodeId, int)> dfs = [&](NodeId i, int k) {
        if (k == app.chain_length && i == app.destination) {
          out.push_back({app.id, src, walk});
          if (static_cast<int>(out.size()) > limit) {
            throw TooLarge("more than " + std::to_string(limit) + " extended paths");
          }
          return;
        }
        seen[i] = 1;
        for (NodeId j : s.graph.neighbors(i)) {
          if (seen[j]) continue;
          walk.push_back(j);
          dfs(j, k);
          walk.pop_back();
        }
        seen[i] = 0;
        if (k < app.chain_length && s.has_cpu(i)) {
          // A computation step starts a fresh simple segment at the same node.
          std::vector<char> saved(s.node_count(), 0);
          std::swap(saved, seen);
          walk.push_back(i);
          dfs(i, k + 1);
          walk.pop_back();
          std::swap(saved, seen);
        }
      };
      dfs(src, 0);
    }
  }
  return out;
}

namespace {

// Euclidean projection onto {x >= 0, sum x = r}.
void project_simplex(std::vector<double>& v, double r) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x) {
    cum += u[x];
    const double t = (cum - r) / static_cast<double>(x + 1);
    if (u[x] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

}  // namespace

BruteForceResult enumerate_bruteforce(const Scenario& s) {
  int max_k = 0;
  for (const auto& app : s.apps) max_k = std::max(max_k, app.chain_length);
  if (s.node_count() > 6 || max_k > 2 || s.app_count() > 2) {
    throw TooLarge("brute force needs <= 6 nodes, K <= 2 and <= 2 applications");
  }
  const StageIndex stages(s.apps);
  const std::vector<ExtendedPath> paths = enumerate_paths(s, 200);
  std::vector<PathData> pool;
  for (const auto& p : paths) pool.push_back(path_data(s, stages, p));

  std::vector<Commodity> cs = commodities(s);
  for (auto& c : cs) {
    for (std::size_t x = 0; x < pool.size(); ++x) {
      if (pool[x].path.app == c.app && pool[x].path.source == c.source) {
        c.paths.push_back(static_cast<int>(x));
        c.flow.push_back(0.0);
      }
    }
    if (c.paths.empty()) throw NoFeasibleStrategy("commodity without any extended path");
  }

  auto loads_of = [&](const std::vector<Commodity>& v) {
    Loads l(s);
    for (const auto& c : v) {
      for (std::size_t x = 0; x < c.paths.size(); ++x) l.add(pool[c.paths[x]], c.flow[x]);
    }
    return l;
  };

  // Feasible start by slices on the cheapest enumerated path.
  {
    Loads loads(s);
    constexpr int kSlices = 64;
    for (int n = 0; n < kSlices; ++n) {
      for (auto& c : cs) {
        std::size_t best = 0;
        double best_cost = kInf;
        for (std::size_t x = 0; x < c.paths.size(); ++x) {
          Loads trial = loads;
          trial.add(pool[c.paths[x]], c.rate / kSlices);
          if (!trial.feasible()) continue;
          const double cost = loads.path_cost(pool[c.paths[x]]);
          if (cost < best_cost) {
            best_cost = cost;
            best = x;
          }
        }
        if (!std::isfinite(best_cost)) throw NoFeasibleStrategy("no feasible slice assignment");
        c.flow[best] += c.rate / kSlices;
        loads.add(pool[c.paths[best]], c.rate / kSlices);
      }
    }
  }

  BruteForceResult res;
  double eta = 1.0;
  Loads loads = loads_of(cs);
  double T = loads.total();
  for (int it = 0;; ++it) {
    std::vector<std::vector<double>> grad(cs.size());
    double gap = 0.0;
    for (std::size_t c = 0; c < cs.size(); ++c) {
      double cmin = kInf;
      for (int p : cs[c].paths) {
        grad[c].push_back(loads.path_cost(pool[p]));
        cmin = std::min(cmin, grad[c].back());
      }
      for (std::size_t x = 0; x < grad[c].size(); ++x) gap += cs[c].flow[x] * (grad[c][x] - cmin);
    }
    res.gap = gap;
    res.iterations = it;
    if (gap <= 1e-8) break;
    if (it >= 2000000) throw NotConverged("projected gradient stopped with gap " + std::to_string(gap));

    for (int tries = 0;; ++tries) {
      std::vector<Commodity> trial = cs;
      double lin = 0.0, sq = 0.0;
      for (std::size_t c = 0; c < cs.size(); ++c) {
        for (std::size_t x = 0; x < grad[c].size(); ++x) trial[c].flow[x] -= eta * grad[c][x];
        project_simplex(trial[c].flow, cs[c].rate);
        for (std::size_t x = 0; x < grad[c].size(); ++x) {
          const double d = trial[c].flow[x] - cs[c].flow[x];
          lin += grad[c][x] * d;
          sq += d * d;
        }
      }
      Loads next = loads_of(trial);
      if (next.feasible()) {
        const double Tn = next.total();
        if (Tn <= T + lin + sq / (2 * eta) || sq == 0.0) {
          cs = std::move(trial);
          loads = std::move(next);
          T = Tn;
          eta *= 2;
          break;
        }
      }
      eta /= 2;
      if (tries > 200) throw NotConverged("projected gradient line search failed");
    }
  }
  res.total_cost = T;
  for (const auto& c : cs) {
    for (std::size_t x = 0; x < c.paths.size(); ++x) {
      res.paths.push_back(pool[c.paths[x]].path);
      res.path_flow.push_back(c.flow[x]);
    }
  }
  return res;
}

Strategy strategy_from_flows(const Scenario& s, const FlowVector& input) {
  const StageIndex stages(s.apps);
  FlowVector f = input;

  // Cancel circulations within each stage.
  for (int st = 0; st < stages.size(); ++st) {
    auto& lf = f.link_flow[st];
    for (;;) {
      std::vector<int> color(s.node_count(), 0);
      std::vector<LinkId> via(s.node_count(), -1);
      std::vector<LinkId> cycle;
      std::function<bool(NodeId)> dfs = [&](NodeId u) {
        color[u] = 1;
        for (int q = 0; q < s.graph.degree(u); ++q) {
          const LinkId l = s.graph.out_link(u, q);
          if (!(lf[l] > 0.0)) continue;
          const NodeId v = s.graph.link(l).to;
          if (color[v] == 1) {
            cycle.push_back(l);
            for (NodeId x = u; x != v; x = s.graph.link(via[x]).from) cycle.push_back(via[x]);
            return true;
          }
          if (color[v] == 0) {
            via[v] = l;
            if (dfs(v)) return true;
          }
        }
        color[u] = 2;
        return false;
      };
      bool found = false;
      for (NodeId r = 0; r < s.node_count() && !found; ++r) {
        if (color[r] == 0) found = dfs(r);
      }
      if (!found) break;
      double m = kInf;
      for (LinkId l : cycle) m = std::min(m, lf[l]);
      for (LinkId l : cycle) lf[l] = (lf[l] == m) ? 0.0 : lf[l] - m;
    }
  }

  // Loads and linearized weights for the zero-traffic rows.
  std::vector<double> F(s.graph.link_count(), 0.0), G(s.node_count(), 0.0);
  double total_rate = 0.0;
  for (NodeId i = 0; i < s.node_count(); ++i) {
    for (int a = 0; a < s.app_count(); ++a) total_rate += s.rate(i, a);
  }
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    const Application& app = s.apps[a];
    for (LinkId l = 0; l < s.graph.link_count(); ++l) F[l] += app.packet_size(k) * f.link_flow[st][l];
    if (k < app.chain_length) {
      for (NodeId i = 0; i < s.node_count(); ++i) G[i] += app.comp_weight(i, k) * f.cpu_flow[st][i];
    }
  }
  std::vector<double> lw(s.graph.link_count()), gw(s.node_count());
  for (LinkId l = 0; l < s.graph.link_count(); ++l) lw[l] = s.link_costs[l].prime(F[l]);
  for (NodeId i = 0; i < s.node_count(); ++i) gw[i] = s.has_cpu(i) ? s.comp_costs[i]->prime(G[i]) : kInf;

  const double zero = 1e-12 * std::max(1.0, total_rate);
  const int n = s.node_count();
  Strategy phi(s);
  for (const auto& app : s.apps) {
    const LayeredTree tree = layered_tree(s, app, lw, gw);
    for (int k = 0; k <= app.chain_length; ++k) {
      const int st = stages.of(app.id, k);
      for (NodeId i = 0; i < n; ++i) {
        if (k == app.chain_length && i == app.destination) continue;
        auto row = phi.row(st, i);
        double out = k < app.chain_length ? f.cpu_flow[st][i] : 0.0;
        for (int q = 0; q < s.graph.degree(i); ++q) out += f.link_flow[st][s.graph.out_link(i, q)];
        if (out > zero) {
          row[Strategy::kCpuSlot] = k < app.chain_length ? f.cpu_flow[st][i] / out : 0.0;
          for (int q = 0; q < s.graph.degree(i); ++q) {
            row[q + 1] = f.link_flow[st][s.graph.out_link(i, q)] / out;
          }
        } else {
          const int next = tree.next[k * n + i];
          if (next < 0) throw NoFeasibleStrategy("node cannot reach the destination");
          if (next / n == k) {
            phi.set(st, i, next % n, 1.0);
          } else {
            row[Strategy::kCpuSlot] = 1.0;
          }
        }
      }
    }
  }
  return phi;
}

void write_flows_csv(std::ostream& out, const Scenario& s, const FlowVector& f) {
  const StageIndex stages(s.apps);
  out << "app,k,from,to,flow\n";
  out.precision(17);
  for (int st = 0; st < stages.size(); ++st) {
    const auto [a, k] = stages.ref(st);
    for (LinkId l = 0; l < s.graph.link_count(); ++l) {
      const double x = f.link_flow[st][l];
      if (x == 0.0) continue;
      const Link& link = s.graph.link(l);
      out << a << ',' << k << ',' << s.graph.name(link.from) << ',' << s.graph.name(link.to) << ','
          << x << '\n';
    }
    for (NodeId i = 0; i < s.node_count(); ++i) {
      const double x = f.cpu_flow[st][i];
      if (x == 0.0) continue;
      out << a << ',' << k << ',' << s.graph.name(i) << ",cpu," << x << '\n';
    }
  }
}

}  // namespace sfc
