#pragma once

#include <cstdint>

#include "sfc/cost.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc::testing {

// Two nodes 1 and 2 (ids 0, 1), one application with one task and
// destination 2. L = (2, 1), D_12 = D_21 = x, C_1 = x, C_2 = 3x, r_1 = 1.
Scenario e1_scenario();
// Compute at node 1, send the result over (1,2).
Strategy e1_strategy_a(const Scenario& s);
// Ship the data to node 2 and compute there.
Strategy e1_strategy_b(const Scenario& s);

// Nodes 1..4 (ids 0..3), one application with one task and destination 4.
// Only node 4 has a CPU (zero cost). Links 1-4 and 2-4 cost x; links 1-2,
// 2-3 and 3-4 cost 0.1x. L = (1, 1), r_1 = 1.
Scenario trap_scenario();
// Everything on the direct links into node 4: KKT holds, T = 1, but the
// cheap chain 1-2-3-4 (T = 0.3) is never explored.
Strategy trap_strategy(const Scenario& s);

struct RandomSpec {
  int nodes = 6;
  double edge_probability = 0.4;
  int apps = 2;
  int chain_length = 2;
  int sources = 3;
  CostFunction::Kind kind = CostFunction::Kind::Queue;
  double link_bound = 60.0;
  double comp_bound = 30.0;
  std::vector<double> packet_sizes = {3.0, 2.0, 1.0};
};

// Connected ER topology with a CPU on every node.
Scenario random_scenario(std::uint64_t seed, const RandomSpec& spec = {});

// Random loop-free strategy: every row splits with random weights over the
// CPU (when allowed) and the neighbors strictly closer to the destination in
// (hop distance, id) order. Every fraction that can be positive is positive.
Strategy random_strategy(const Scenario& s, std::uint64_t seed);

}  // namespace sfc::testing
