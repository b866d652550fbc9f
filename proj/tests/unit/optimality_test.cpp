#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sfc/errors.hpp"
#include "sfc/gp.hpp"
#include "sfc/optimality.hpp"

using namespace sfc;
using namespace sfc::testing;

TEST(Kkt, TrapStrategySatisfiesKkt) {
  const Scenario s = trap_scenario();
  const Strategy phi = trap_strategy(s);
  EXPECT_DOUBLE_EQ(compute_flows(s, phi).total_cost, 1.0);
  EXPECT_TRUE(check_kkt(s, phi).holds);
}

TEST(Kkt, E1Strategies) {
  const Scenario s = e1_scenario();
  EXPECT_TRUE(check_kkt(s, e1_strategy_a(s)).holds);
  const auto rep = check_kkt(s, e1_strategy_b(s));
  EXPECT_FALSE(rep.holds);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].node, 0);
  EXPECT_EQ(rep.violations[0].k, 0);
  EXPECT_EQ(rep.violations[0].direction, 1);
  EXPECT_DOUBLE_EQ(rep.violations[0].value, 5.0);
  EXPECT_DOUBLE_EQ(rep.violations[0].row_min, 2.0);
}

TEST(Sufficient, TrapStrategyFailsAtZeroTrafficNode) {
  const Scenario s = trap_scenario();
  const auto rep = check_sufficient(s, trap_strategy(s));
  EXPECT_FALSE(rep.holds);
  ASSERT_FALSE(rep.violations.empty());
  for (const auto& v : rep.violations) {
    EXPECT_EQ(v.node, 1);
    EXPECT_EQ(v.direction, 3);
    EXPECT_NEAR(v.value, 1.0, 1e-12);
    EXPECT_NEAR(v.row_min, 0.2, 1e-12);
  }
}

TEST(Sufficient, E1StrategyA) {
  const Scenario s = e1_scenario();
  EXPECT_TRUE(check_sufficient(s, e1_strategy_a(s)).holds);
  EXPECT_FALSE(check_sufficient(s, e1_strategy_b(s)).holds);
}

TEST(Sufficient, ImpliesKkt) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = random_scenario(seed);
    GpConfig cfg;
    cfg.max_iters = 30 * static_cast<int>(seed);
    std::vector<Strategy> candidates{random_strategy(s, seed), init_strategy(s)};
    candidates.push_back(run_gp(s, std::nullopt, cfg).strategy);
    for (const auto& phi : candidates) {
      // A delta gap of tol becomes a gap of t * tol in dT/dphi.
      double t_max = 1.0;
      for (const auto& row : compute_flows(s, phi).traffic) {
        for (double t : row) t_max = std::max(t_max, t);
      }
      if (check_sufficient(s, phi).holds) {
        EXPECT_TRUE(check_kkt(s, phi, {1e-6 * t_max, 1e-9}).holds);
      }
    }
  }
}

TEST(Geodesic, IdenticalEndpoints) {
  RandomSpec spec;
  spec.sources = spec.nodes;
  const Scenario s = random_scenario(3, spec);
  const Strategy phi = random_strategy(s, 3);
  EXPECT_EQ(geodesic_probe(s, phi, phi, 11), 0.0);
}

TEST(Geodesic, ConvexAlongFlowInterpolation) {
  RandomSpec spec;
  spec.sources = spec.nodes;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = random_scenario(seed, spec);
    EXPECT_LE(geodesic_probe(s, random_strategy(s, seed), random_strategy(s, seed + 50), 21), 1e-8);
  }
}

TEST(Geodesic, RefusesZeroTraffic) {
  const Scenario s = e1_scenario();
  EXPECT_THROW(geodesic_probe(s, e1_strategy_a(s), e1_strategy_b(s), 5), ZeroTrafficNode);
}
