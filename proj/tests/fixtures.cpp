#include "fixtures.hpp"

#include <algorithm>
#include <random>

#include "sfc/paths.hpp"
#include "sfc/topology.hpp"

namespace sfc::testing {

Scenario e1_scenario() {
  Scenario s;
  s.graph = Graph(2, {{0, 1}}, {"1", "2"});
  Application app;
  app.id = 0;
  app.destination = 1;
  app.chain_length = 1;
  app.packet_sizes = {2.0, 1.0};
  app.comp_weights = uniform_comp_weights(2, 1);
  s.apps = {app};
  s.link_costs.assign(s.graph.link_count(), CostFunction::linear(1.0));
  s.comp_costs = {CostFunction::linear(1.0), CostFunction::linear(3.0)};
  s.input_rates = {{1.0}, {0.0}};
  return s;
}

Strategy e1_strategy_a(const Scenario& s) {
  Strategy phi(s);
  phi.set(0, 0, Strategy::kCpu, 1.0);
  phi.set(0, 1, Strategy::kCpu, 1.0);
  phi.set(1, 0, 1, 1.0);
  return phi;
}

Strategy e1_strategy_b(const Scenario& s) {
  Strategy phi(s);
  phi.set(0, 0, 1, 1.0);
  phi.set(0, 1, Strategy::kCpu, 1.0);
  phi.set(1, 0, 1, 1.0);
  return phi;
}

Scenario trap_scenario() {
  Scenario s;
  s.graph = Graph(4, {{0, 3}, {1, 3}, {0, 1}, {1, 2}, {2, 3}}, {"1", "2", "3", "4"});
  Application app;
  app.id = 0;
  app.destination = 3;
  app.chain_length = 1;
  app.packet_sizes = {1.0, 1.0};
  app.comp_weights = uniform_comp_weights(4, 1);
  s.apps = {app};
  s.link_costs.resize(s.graph.link_count(), CostFunction::linear(0.1));
  for (LinkId l = 0; l < s.graph.link_count(); ++l) {
    const Link& k = s.graph.link(l);
    const auto [u, v] = std::minmax(k.from, k.to);
    if (v == 3 && (u == 0 || u == 1)) s.link_costs[l] = CostFunction::linear(1.0);
  }
  s.comp_costs = {std::nullopt, std::nullopt, std::nullopt, CostFunction::linear(0.0)};
  s.input_rates = {{1.0}, {0.0}, {0.0}, {0.0}};
  return s;
}

Strategy trap_strategy(const Scenario& s) {
  Strategy phi(s);
  for (int st = 0; st < 2; ++st) {
    for (NodeId i = 0; i < 3; ++i) phi.set(st, i, 3, 1.0);
  }
  phi.set(0, 3, Strategy::kCpu, 1.0);
  return phi;
}

Scenario random_scenario(std::uint64_t seed, const RandomSpec& spec) {
  const Graph g = connected_er(spec.nodes, spec.edge_probability, seed);
  SampleParams p;
  p.apps = spec.apps;
  p.chain_length = spec.chain_length;
  p.sources = spec.sources;
  p.link = {spec.kind, spec.link_bound};
  p.comp = {spec.kind, spec.comp_bound};
  std::vector<double> sizes = spec.packet_sizes;
  sizes.resize(spec.chain_length + 1, sizes.empty() ? 1.0 : sizes.back());
  p.packet_sizes = sizes;
  return sample_scenario(g, p, seed * 7919 + 17);
}

Strategy random_strategy(const Scenario& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  Strategy phi(s);
  const StageIndex stages(s.apps);
  for (const auto& app : s.apps) {
    const HopTree hops = shortest_tree_to(s.graph, hop_weights(s.graph), {app.destination});
    auto before = [&](NodeId j, NodeId i) {
      return std::pair(hops.dist[j], j) < std::pair(hops.dist[i], i);
    };
    for (int k = 0; k <= app.chain_length; ++k) {
      const int st = stages.of(app.id, k);
      const bool final_stage = k == app.chain_length;
      for (NodeId i = 0; i < s.node_count(); ++i) {
        if (final_stage && i == app.destination) continue;
        std::vector<NodeId> dirs;
        if (!final_stage && s.has_cpu(i)) dirs.push_back(Strategy::kCpu);
        for (NodeId j : s.graph.neighbors(i)) {
          if (before(j, i)) dirs.push_back(j);
        }
        std::vector<double> w(dirs.size());
        double sum = 0.0;
        for (double& x : w) sum += (x = weight(rng));
        for (std::size_t q = 0; q < dirs.size(); ++q) phi.set(st, i, dirs[q], w[q] / sum);
      }
    }
  }
  return phi;
}

}  // namespace sfc::testing
