#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfc/graph.hpp"
#include "sfc/scenario.hpp"

namespace sfc {

// Per-(stage, node) rows of values over the directions {CPU} ∪ neighbors.
// A row has 1 + degree(i) slots: slot 0 is the local CPU, slot q+1 is
// neighbors(i)[q].
class RowTable {
 public:
  static constexpr int kCpuSlot = 0;
  // Direction id used for the CPU in APIs that take a destination node.
  static constexpr NodeId kCpu = -1;

  RowTable() = default;
  explicit RowTable(const Scenario& s, double fill = 0.0);

  int stage_count() const { return stages_; }
  int node_count() const { return nodes_; }

  std::span<double> row(int stage, NodeId i) {
    return {data_.data() + offset(stage, i), row_size(i)};
  }
  std::span<const double> row(int stage, NodeId i) const {
    return {data_.data() + offset(stage, i), row_size(i)};
  }
  std::size_t row_size(NodeId i) const { return neighbors_[i].size() + 1; }
  std::span<const NodeId> neighbors(NodeId i) const { return neighbors_[i]; }

  // Slot of direction `to` in row i, or -1 when `to` is not a neighbor.
  int slot_of(NodeId i, NodeId to) const;
  // Value toward `to` (kCpu for the CPU); `absent` for non-neighbors.
  double get(int stage, NodeId i, NodeId to, double absent = 0.0) const;
  // Throws std::invalid_argument when `to` is not a neighbor of i.
  void set(int stage, NodeId i, NodeId to, double value);
  // Node reached through slot q of row i; kCpu for slot 0.
  NodeId target(NodeId i, int slot) const { return slot == 0 ? kCpu : neighbors_[i][slot - 1]; }

  // Largest absolute difference over all entries; +inf when shapes differ.
  double max_abs_diff(const RowTable& other) const;

  bool operator==(const RowTable& other) const = default;

 private:
  std::size_t offset(int stage, NodeId i) const {
    return row_offset_[i] + static_cast<std::size_t>(stage) * stride_;
  }

  int stages_ = 0;
  int nodes_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::size_t> row_offset_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<double> data_;
};

// Forwarding fractions phi. Rows of non-final stages (and of the final stage
// away from the destination) sum to 1; the destination's final-stage row is 0.
class Strategy : public RowTable {
 public:
  Strategy() = default;
  // All-zero strategy shaped for the scenario.
  explicit Strategy(const Scenario& s) : RowTable(s, 0.0) {}

  bool operator==(const Strategy& other) const = default;
};

struct StrategyViolation {
  NodeId node;
  int app;
  int k;
  std::string what;
};

// Row sums (1, or 0 for the destination's final stage), fractions in [0,1],
// no CPU use at the final stage or on nodes without a CPU. Empty when valid.
std::vector<StrategyViolation> validate_strategy(const Scenario& s, const Strategy& phi,
                                                 double tol = 1e-8);

struct StageLoops {
  int stage;
  std::vector<std::vector<NodeId>> cycles;
};

// Directed cycles among positive-fraction links within each stage. Stages
// without cycles are omitted, so the result is empty iff phi is loop-free.
std::vector<StageLoops> detect_loops(const Strategy& phi);

// Topological order of the positive-fraction support of one stage, or
// nullopt if it has a cycle.
std::optional<std::vector<NodeId>> stage_order(const Strategy& phi, int stage);

enum class InitMode { LocalComputation, ComputeAtDestination };

// Loop-free strategy with finite cost. The requested mode is tried first,
// then the other mode, then an even split over CPU and every neighbor that
// is strictly closer to the destination. Throws NoFeasibleStrategy when none
// of them has finite cost (or the total CPU capacity cannot absorb the
// minimum workload).
Strategy init_strategy(const Scenario& s, InitMode mode = InitMode::LocalComputation);

// The same construction without the fallbacks or the cost check.
Strategy shortest_path_strategy(const Scenario& s, InitMode mode);

}  // namespace sfc
