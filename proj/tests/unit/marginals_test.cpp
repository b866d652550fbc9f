#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "sfc/flow.hpp"
#include "sfc/marginals.hpp"

using namespace sfc;
using namespace sfc::testing;

namespace {

struct Tables {
  FlowState state;
  MarginalTable m;
  DeltaTable delta;
};

Tables tables(const Scenario& s, const Strategy& phi) {
  Tables t;
  t.state = compute_flows(s, phi);
  t.m = traffic_marginals(s, phi, t.state);
  t.delta = modified_marginals(s, t.state, t.m);
  return t;
}

}  // namespace

TEST(Marginals, E1StrategyA) {
  const Scenario s = e1_scenario();
  const Tables t = tables(s, e1_strategy_a(s));
  EXPECT_DOUBLE_EQ(t.m.at(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(t.m.at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(t.m.at(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(t.m.at(1, 1), 0.0);
}

TEST(Marginals, ModifiedMarginalsE1) {
  const Scenario s = e1_scenario();
  const Tables t = tables(s, e1_strategy_a(s));
  EXPECT_DOUBLE_EQ(t.delta.delta(0, 0, Strategy::kCpu), 2.0);
  EXPECT_DOUBLE_EQ(t.delta.delta(0, 0, 1), 5.0);
  EXPECT_DOUBLE_EQ(t.delta.delta(1, 0, 1), 1.0);
  EXPECT_TRUE(std::isinf(t.delta.delta(1, 0, Strategy::kCpu)));
}

TEST(Marginals, AbsentDirectionsAreInfinite) {
  const Scenario s = trap_scenario();
  const Tables t = tables(s, trap_strategy(s));
  EXPECT_TRUE(std::isinf(t.delta.delta(0, 0, 2)));
  EXPECT_TRUE(std::isinf(t.delta.delta(0, 0, Strategy::kCpu)));
  EXPECT_FALSE(std::isinf(t.delta.delta(0, 3, Strategy::kCpu)));
}

TEST(Marginals, DestinationFinalStageIsZero) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = random_scenario(seed);
    const Tables t = tables(s, random_strategy(s, seed));
    const StageIndex stages(s.apps);
    for (const auto& app : s.apps) {
      EXPECT_EQ(t.m.at(stages.of(app.id, app.chain_length), app.destination), 0.0);
    }
  }
}

TEST(Marginals, MatchInjectionFiniteDifference) {
  std::mt19937_64 rng(42);
  const double eps = 1e-6;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = random_scenario(seed);
    const Strategy phi = random_strategy(s, seed + 1000);
    const Tables t = tables(s, phi);
    const StageIndex stages(s.apps);
    std::uniform_int_distribution<int> pick_stage(0, stages.size() - 1);
    std::uniform_int_distribution<int> pick_node(0, s.node_count() - 1);
    for (int probe = 0; probe < 5; ++probe) {
      const int st = pick_stage(rng);
      const NodeId i = pick_node(rng);
      const double fd =
          (compute_flows(s, phi, {{i, st, eps}}).total_cost - t.state.total_cost) / eps;
      const double m = t.m.at(st, i);
      EXPECT_NEAR(fd, m, 1e-5 * std::max(std::abs(m), 1e-3))
          << "seed " << seed << " stage " << st << " node " << i;
    }
  }
}

TEST(Marginals, RowConsistency) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Scenario s = random_scenario(seed);
    const Strategy phi = random_strategy(s, seed);
    const Tables t = tables(s, phi);
    const StageIndex stages(s.apps);
    for (int st = 0; st < stages.size(); ++st) {
      const auto [a, k] = stages.ref(st);
      for (NodeId i = 0; i < s.node_count(); ++i) {
        if (k == s.apps[a].chain_length && i == s.apps[a].destination) continue;
        const auto row = phi.row(st, i);
        const auto d = t.delta.row(st, i);
        double sum = 0.0;
        for (std::size_t q = 0; q < row.size(); ++q) {
          if (row[q] > 0.0) sum += row[q] * d[q];
        }
        EXPECT_NEAR(sum, t.m.at(st, i), 1e-9);
      }
    }
  }
}

TEST(Blocking, HigherMarginalIsBlocked) {
  const Scenario s = e1_scenario();
  const Strategy phi = e1_strategy_a(s);
  const Tables t = tables(s, phi);
  const BlockedSets b = blocked_sets(s, phi, t.state, t.m);
  // Node 1 (2.0) must not start sending stage-0 data to node 2 (3.0).
  EXPECT_TRUE(b.blocked(0, 0, 1));
  // Node 2 may send to node 1: lower marginal, clean downstream.
  EXPECT_FALSE(b.blocked(0, 1, 0));
  EXPECT_FALSE(b.blocked(0, 0, Strategy::kCpu));
  EXPECT_FALSE(b.blocked(0, 1, Strategy::kCpu));
}

TEST(Blocking, NonNeighborsAreBlocked) {
  const Scenario s = trap_scenario();
  const Strategy phi = trap_strategy(s);
  const Tables t = tables(s, phi);
  const BlockedSets b = blocked_sets(s, phi, t.state, t.m);
  EXPECT_TRUE(b.blocked(0, 0, 2));
  // Node 2 (marginal 1) sees node 3 (marginal 0.1) with a clean downstream.
  EXPECT_FALSE(b.blocked(0, 1, 2));
}

TEST(Blocking, ImproperDownstreamLinkBlocksUpstream) {
  const Scenario s = trap_scenario();
  Strategy phi = trap_strategy(s);
  // Node 3 splits between 4 (cheap) and 2, which takes the expensive link
  // 2-4: link (3,2) is improper since m_2 = 1 >= m_3 = 0.6.
  phi.set(0, 2, 3, 0.5);
  phi.set(0, 2, 1, 0.5);
  const Tables t = tables(s, phi);
  ASSERT_NEAR(t.m.at(0, 1), 1.0, 1e-12);
  ASSERT_NEAR(t.m.at(0, 2), 0.6, 1e-12);
  const BlockedSets b = blocked_sets(s, phi, t.state, t.m);
  // m_3 < m_2, yet node 2 may not use node 3: it would close the loop 2-3-2.
  EXPECT_TRUE(b.blocked(0, 1, 2));
  EXPECT_FALSE(b.blocked(1, 1, 2));
}
