#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sfc/cost.hpp"
#include "sfc/graph.hpp"
#include "sfc/topology.hpp"

namespace sfc {

// A service chain: K tasks applied in order to data injected at the sources,
// with the final result (stage K) delivered to `destination`.
struct Application {
  int id = 0;
  NodeId destination = 0;
  int chain_length = 0;
  // Bits per packet of stage k, k = 0..K.
  std::vector<double> packet_sizes;
  // Workload per packet for performing task k+1 at node i: comp_weights[i][k], k < K.
  std::vector<std::vector<double>> comp_weights;

  double packet_size(int k) const { return packet_sizes[k]; }
  double comp_weight(NodeId i, int k) const { return comp_weights[i][k]; }
};

struct Scenario {
  Graph graph;
  std::vector<Application> apps;
  std::vector<CostFunction> link_costs;                // per directed link
  std::vector<std::optional<CostFunction>> comp_costs;  // per node; nullopt = no CPU
  std::vector<std::vector<double>> input_rates;        // [node][app], packets/sec
  std::uint64_t seed = 0;

  int node_count() const { return graph.node_count(); }
  int app_count() const { return static_cast<int>(apps.size()); }
  double rate(NodeId i, int a) const { return input_rates[i][a]; }
  bool has_cpu(NodeId i) const { return comp_costs[i].has_value(); }
};

// Throws std::invalid_argument when sizes or values are inconsistent.
void validate_scenario(const Scenario& s);

// Packet sizes L_k = 10 - 5k, clipped at zero.
std::vector<double> default_packet_sizes(int chain_length);

// Uniform comp weights for every (node, task).
std::vector<std::vector<double>> uniform_comp_weights(int nodes, int chain_length, double w = 1.0);

// Removes applications without any positive input rate; ids are renumbered.
Scenario drop_inactive_apps(Scenario s);

// Flat numbering of the (application, stage) pairs.
struct StageRef {
  int app;
  int k;
};

class StageIndex {
 public:
  StageIndex() = default;
  explicit StageIndex(const std::vector<Application>& apps);

  int size() const { return static_cast<int>(refs_.size()); }
  int of(int app, int k) const { return offsets_[app] + k; }
  StageRef ref(int s) const { return refs_[s]; }
  bool is_final(int s, const std::vector<Application>& apps) const {
    return refs_[s].k == apps[refs_[s].app].chain_length;
  }

 private:
  std::vector<int> offsets_;
  std::vector<StageRef> refs_;
};

struct CostSpec {
  CostFunction::Kind kind = CostFunction::Kind::Queue;
  // Upper bound on the slope (Linear) or capacity (Queue); parameters are
  // drawn uniformly in [0.5 * bound, bound].
  double bound = 10.0;
};

struct SampleParams {
  int apps = 3;
  int chain_length = 2;
  int sources = 3;
  std::pair<double, double> rate_range = {0.5, 1.5};
  CostSpec link;
  CostSpec comp;
  std::optional<std::vector<double>> packet_sizes;
  double comp_weight = 1.0;
  double rate_scale = 1.0;
};

// Random applications, sources, rates and cost parameters on a fixed topology.
// Deterministic under `seed`. Throws std::invalid_argument when
// sources > |V| or the rate range is empty.
Scenario sample_scenario(const Graph& topology, const SampleParams& params, std::uint64_t seed);

struct ScenarioSpec {
  TopologySpec topology;
  SampleParams sample;
};

// Topology and sampling both driven by `seed`.
Scenario build_scenario(const ScenarioSpec& spec, std::uint64_t seed);

// Copy with every input rate multiplied by `factor`.
Scenario scale_rates(Scenario s, double factor);

}  // namespace sfc
