#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "sfc/errors.hpp"
#include "sfc/gp.hpp"
#include "sfc/oracle.hpp"
#include "sfc/topology.hpp"

using namespace sfc;
using namespace sfc::testing;

namespace {

// Line 1 - 2 - 3 with the only CPU at 3, the destination.
Scenario line_scenario() {
  Scenario s;
  s.graph = Graph(3, {{0, 1}, {1, 2}}, {"1", "2", "3"});
  Application app;
  app.id = 0;
  app.destination = 2;
  app.chain_length = 1;
  app.packet_sizes = {2.0, 1.0};
  app.comp_weights = uniform_comp_weights(3, 1);
  s.apps = {app};
  s.link_costs.assign(s.graph.link_count(), CostFunction::queue(5.0));
  s.comp_costs = {std::nullopt, std::nullopt, CostFunction::queue(4.0)};
  s.input_rates = {{1.0}, {0.5}, {0.0}};
  return s;
}

RandomSpec tiny_spec(std::uint64_t seed) {
  RandomSpec spec;
  spec.nodes = 4 + static_cast<int>(seed % 3);
  spec.edge_probability = 0.3;
  spec.apps = 1 + static_cast<int>(seed % 2);
  spec.chain_length = 1 + static_cast<int>(seed % 3 == 0);
  spec.sources = 2;
  return spec;
}

Scenario abilene_scenario(std::uint64_t seed) {
  SampleParams p;
  p.apps = 3;
  p.chain_length = 2;
  p.sources = 3;
  p.link = {CostFunction::Kind::Queue, 15.0};
  p.comp = {CostFunction::Kind::Queue, 10.0};
  return sample_scenario(load_edge_list(data_dir() / "abilene.edges"), p, seed);
}

double max_load_diff(const FlowState& a, const FlowState& b) {
  double d = 0.0;
  for (std::size_t l = 0; l < a.link_total.size(); ++l) {
    d = std::max(d, std::abs(a.link_total[l] - b.link_total[l]));
  }
  for (std::size_t i = 0; i < a.cpu_total.size(); ++i) {
    d = std::max(d, std::abs(a.cpu_total[i] - b.cpu_total[i]));
  }
  return d;
}

}  // namespace

TEST(SolveFlowDomain, E1OptimumIsTwo) {
  const OracleResult r = solve_flow_domain(e1_scenario());
  EXPECT_NEAR(r.total_cost, 2.0, 1e-6);
  EXPECT_LE(r.gap, 1e-9 * std::max(1.0, r.total_cost));
}

TEST(SolveFlowDomain, TrapInstanceOptimum) {
  const OracleResult r = solve_flow_domain(trap_scenario());
  EXPECT_NEAR(r.total_cost, 0.3, 1e-6);
  ASSERT_EQ(r.paths.size(), 1u);
  EXPECT_EQ(r.paths[0].nodes, (std::vector<NodeId>{0, 1, 2, 3, 3}));
}

TEST(SolveFlowDomain, GapMeetsTolerance) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = random_scenario(seed);
    for (double tol : {1e-4, 1e-8}) {
      const OracleResult r = solve_flow_domain(s, {tol, 100000});
      EXPECT_LE(r.gap, tol * std::max(1.0, r.total_cost)) << "seed " << seed;
      EXPECT_DOUBLE_EQ(r.gap, r.gap_history.back());
    }
  }
}

TEST(SolveFlowDomain, FlowsConserveAndMatchCost) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = random_scenario(seed);
    const OracleResult r = solve_flow_domain(s);
    EXPECT_LE(conservation_error(s, r.flows), 1e-9) << "seed " << seed;
    EXPECT_NEAR(flow_cost(s, r.flows), r.total_cost, 1e-9 * std::max(1.0, r.total_cost));
    for (const auto& stage : r.flows.link_flow) {
      for (double x : stage) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(SolveFlowDomain, CostHistoryIsMonotone) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const OracleResult r = solve_flow_domain(random_scenario(seed));
    for (std::size_t n = 1; n < r.cost_history.size(); ++n) {
      EXPECT_LE(r.cost_history[n], r.cost_history[n - 1] * (1 + 1e-12)) << "seed " << seed;
    }
    // The gap is not monotone in general for conditional-gradient methods;
    // it must still end below its starting value.
    EXPECT_LE(r.gap_history.back(), r.gap_history.front());
  }
}

TEST(SolveFlowDomain, InfeasibleInputThrows) {
  Scenario s = line_scenario();
  s.input_rates = {{3.0}, {0.0}, {0.0}};
  EXPECT_THROW(solve_flow_domain(s), NoFeasibleStrategy);
}

TEST(SolveFlowDomain, IterationCapThrows) {
  EXPECT_THROW(solve_flow_domain(random_scenario(5), {1e-15, 1}), NotConverged);
}

TEST(BruteForce, E1AgreesWithFlowDomain) {
  const Scenario s = e1_scenario();
  const BruteForceResult b = enumerate_bruteforce(s);
  EXPECT_NEAR(b.total_cost, 2.0, 1e-6);
  EXPECT_NEAR(b.total_cost, solve_flow_domain(s).total_cost, 1e-6);
}

TEST(BruteForce, TrapInstance) {
  EXPECT_NEAR(enumerate_bruteforce(trap_scenario()).total_cost, 0.3, 1e-6);
}

TEST(BruteForce, SinglePathIsForced) {
  const Scenario s = line_scenario();
  const BruteForceResult b = enumerate_bruteforce(s);
  ASSERT_EQ(b.paths.size(), 2u);
  EXPECT_DOUBLE_EQ(b.path_flow[0], 1.0);
  EXPECT_DOUBLE_EQ(b.path_flow[1], 0.5);
  // F_12 = 2, F_23 = 3, G_3 = 1.5.
  const double direct = 2.0 / 3.0 + 3.0 / 2.0 + 1.5 / 2.5;
  EXPECT_NEAR(b.total_cost, direct, 1e-12);
  EXPECT_NEAR(solve_flow_domain(s).total_cost, direct, 1e-12);
}

TEST(BruteForce, RejectsLargeInstances) {
  EXPECT_THROW(enumerate_bruteforce(random_scenario(1, {.nodes = 8})), TooLarge);
  EXPECT_THROW(enumerate_bruteforce(random_scenario(1, {.chain_length = 3})), TooLarge);
  EXPECT_THROW(enumerate_bruteforce(random_scenario(1, {.apps = 3})), TooLarge);
  EXPECT_THROW(enumerate_paths(random_scenario(2), 5), TooLarge);
}

TEST(BruteForce, OracleOracleAgreement) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 40 && compared < 8; ++seed) {
    const Scenario s = random_scenario(seed, tiny_spec(seed));
    BruteForceResult b;
    try {
      b = enumerate_bruteforce(s);
    } catch (const TooLarge&) {
      continue;
    }
    const OracleResult r = solve_flow_domain(s);
    EXPECT_NEAR(r.total_cost, b.total_cost, 1e-5 * std::max(1.0, r.total_cost)) << "seed " << seed;
    ++compared;
  }
  EXPECT_EQ(compared, 8);
}

TEST(EnumeratePaths, ExtendedPathShape) {
  const Scenario s = random_scenario(4, tiny_spec(3));
  for (const ExtendedPath& p : enumerate_paths(s, 100000)) {
    const Application& app = s.apps[p.app];
    EXPECT_EQ(p.nodes.front(), p.source);
    EXPECT_EQ(p.nodes.back(), app.destination);
    int computes = 0;
    for (std::size_t x = 0; x + 1 < p.nodes.size(); ++x) {
      if (p.nodes[x] == p.nodes[x + 1]) {
        ++computes;
      } else {
        EXPECT_TRUE(s.graph.has_link(p.nodes[x], p.nodes[x + 1]));
      }
    }
    EXPECT_EQ(computes, app.chain_length);
  }
}

TEST(StrategyFromFlows, E1GivesStrategyA) {
  const Scenario s = e1_scenario();
  const Strategy phi = strategy_from_flows(s, solve_flow_domain(s).flows);
  EXPECT_EQ(phi, e1_strategy_a(s));
}

TEST(StrategyFromFlows, EvenSplitNormalizes) {
  // Node 1 sends 1 unit to each of 2 and 3 (t = 2).
  Scenario s;
  s.graph = Graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, {"1", "2", "3", "4"});
  Application app;
  app.id = 0;
  app.destination = 3;
  app.chain_length = 1;
  app.packet_sizes = {1.0, 1.0};
  app.comp_weights = uniform_comp_weights(4, 1);
  s.apps = {app};
  s.link_costs.assign(s.graph.link_count(), CostFunction::linear(1.0));
  s.comp_costs.assign(4, CostFunction::linear(1.0));
  s.input_rates = {{2.0}, {0.0}, {0.0}, {0.0}};

  FlowVector f;
  f.link_flow.assign(2, std::vector<double>(s.graph.link_count(), 0.0));
  f.cpu_flow.assign(2, std::vector<double>(4, 0.0));
  f.link_flow[0][s.graph.link_id(0, 1)] = 1.0;
  f.link_flow[0][s.graph.link_id(0, 2)] = 1.0;
  f.link_flow[0][s.graph.link_id(1, 3)] = 1.0;
  f.link_flow[0][s.graph.link_id(2, 3)] = 1.0;
  f.cpu_flow[0][3] = 2.0;
  ASSERT_LE(conservation_error(s, f), 1e-15);

  const Strategy phi = strategy_from_flows(s, f);
  EXPECT_DOUBLE_EQ(phi.get(0, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(phi.get(0, 0, 2), 0.5);
  EXPECT_DOUBLE_EQ(phi.get(0, 0, Strategy::kCpu), 0.0);
}

TEST(StrategyFromFlows, RoundTripReproducesLoads) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = random_scenario(seed);
    const FlowState state = compute_flows(s, random_strategy(s, seed));
    const Strategy phi = strategy_from_flows(s, flows_of(state));
    EXPECT_LE(max_load_diff(compute_flows(s, phi), state), 1e-9) << "seed " << seed;

    const OracleResult r = solve_flow_domain(s);
    const FlowState back = compute_flows(s, strategy_from_flows(s, r.flows));
    EXPECT_NEAR(back.total_cost, r.total_cost, 1e-9 * std::max(1.0, r.total_cost));
  }
}

TEST(StrategyFromFlows, CancelsCirculations) {
  const Scenario s = e1_scenario();
  FlowVector f = flows_of(compute_flows(s, e1_strategy_a(s)));
  f.link_flow[0][s.graph.link_id(0, 1)] += 0.25;
  f.link_flow[0][s.graph.link_id(1, 0)] += 0.25;
  EXPECT_EQ(strategy_from_flows(s, f), e1_strategy_a(s));
}

TEST(TwoSidedOptimality, OracleBoundsEveryStrategy) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Scenario s = random_scenario(seed);
    const double t_star = solve_flow_domain(s).total_cost;
    for (std::uint64_t k = 0; k < 4; ++k) {
      const Strategy phi = random_strategy(s, seed * 10 + k);
      const double T = compute_flows(s, phi).total_cost;
      EXPECT_LE(t_star, T + 1e-9);
      const bool equal = T <= t_star + 1e-6;
      EXPECT_EQ(equal, check_sufficient(s, phi).holds) << "seed " << seed;
    }
    GpConfig cfg;
    cfg.tol = 1e-9;
    const GpResult g = run_gp(s, std::nullopt, cfg);
    ASSERT_TRUE(g.converged);
    EXPECT_TRUE(check_sufficient(s, g.strategy).holds);
    EXPECT_NEAR(g.state.total_cost, t_star, 1e-6) << "seed " << seed;
  }
}

TEST(TwoSidedOptimality, KktPointAboveOracle) {
  const Scenario s = trap_scenario();
  const Strategy phi = trap_strategy(s);
  EXPECT_TRUE(check_kkt(s, phi).holds);
  EXPECT_FALSE(check_sufficient(s, phi).holds);
  EXPECT_GT(compute_flows(s, phi).total_cost, solve_flow_domain(s).total_cost + 0.5);
}

TEST(TwoSidedOptimality, GpOnAbileneWithinOnePercent) {
  const Scenario s = abilene_scenario(7);
  const double t_star = solve_flow_domain(s).total_cost;
  const GpResult g = run_gp(s, std::nullopt);
  EXPECT_TRUE(g.converged);
  EXPECT_LE(g.state.total_cost, t_star * 1.01);
  EXPECT_GE(g.state.total_cost, t_star * (1 - 1e-9));
}

TEST(WriteFlowsCsv, HeaderAndRows) {
  const Scenario s = e1_scenario();
  std::ostringstream out;
  write_flows_csv(out, s, flows_of(compute_flows(s, e1_strategy_a(s))));
  EXPECT_EQ(out.str(), "app,k,from,to,flow\n0,0,1,cpu,1\n0,1,1,2,1\n");
}
