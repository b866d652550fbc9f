#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sfc/flow.hpp"
#include "sfc/gp.hpp"
#include "sfc/metrics.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

enum class Algorithm { Gp, Spoc, Lcof, LprSc };

// "gp", "spoc", "lcof", "lpr-sc"; parse throws ConfigError.
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);
std::vector<Algorithm> all_algorithms();

struct AlgorithmRun {
  Strategy strategy;
  FlowState state;  // state.total_cost = +inf when infeasible
  std::vector<TraceEntry> trace;
  int iterations = 0;
  bool feasible = true;
  bool converged = true;
  std::string error;
};

// Library errors are caught and reported as an infeasible run.
AlgorithmRun run_algorithm(const Scenario& s, Algorithm a, const GpConfig& gp = {});

enum class SweepKind { None, RateScale, SizeRatio };

std::string to_string(SweepKind k);
SweepKind parse_sweep_kind(const std::string& name);

struct SweepSpec {
  SweepKind kind = SweepKind::None;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ScenarioSpec scenario;
  std::vector<Algorithm> algorithms = all_algorithms();
  SweepSpec sweep;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::filesystem::path output_dir;
  GpConfig gp;
};

// Throws ConfigError.
void validate_config(const ExperimentConfig& c);

// Scenario rows of the standard benchmark table: connected-er, balanced-tree,
// fog, abilene, lhc, geant, sw-linear, sw-queue.
std::vector<std::string> preset_names();
// Throws ConfigError on an unknown name.
ScenarioSpec preset_scenario(const std::string& name);
ExperimentConfig preset_experiment(const std::string& name);

// L_0 = ratio, L_K = 1, intermediate stages linearly interpolated.
std::vector<double> ratio_packet_sizes(int chain_length, double ratio);

// Rate factor or data/result size ratio applied to a drawn scenario.
Scenario apply_sweep(const Scenario& s, SweepKind kind, double value);

struct RunRecord {
  std::string scenario;
  Algorithm algorithm = Algorithm::Gp;
  std::uint64_t seed = 0;
  double sweep_value = 1.0;
  bool feasible = true;
  bool converged = true;
  int iterations = 0;
  double total_cost = 0.0;
  // total_cost over the worst finite cost of the same (scenario, seed,
  // sweep value) group; +inf for infeasible runs.
  double normalized = 0.0;
  double h_data = 0.0;
  double h_result = 0.0;
  double seconds = 0.0;
  std::string error;
  Strategy strategy;
};

// One record per sweep value x seed x algorithm, in that nesting order.
// Deterministic per seed apart from `seconds`.
std::vector<RunRecord> run_experiment(const ExperimentConfig& c);
void normalize_records(std::vector<RunRecord>& records);

struct SizeRatioPoint {
  double ratio = 1.0;
  std::uint64_t seed = 0;
  double total_cost = 0.0;
  double h_data = 0.0;
  double h_result = 0.0;
  bool converged = true;
};

// GP only. Uses c.sweep.values, or {0.5, 1, 2, 4, 8} when empty.
std::vector<SizeRatioPoint> size_ratio_sweep(const ExperimentConfig& c);

// Median; mean of the middle pair for even sizes. Throws on empty input.
double median(std::vector<double> v);
// Adjacent pairs that break a nondecreasing (or nonincreasing) order.
int count_inversions(const std::vector<double>& v, bool nondecreasing = true);

// Median total cost of one algorithm at one sweep value over seeds.
double median_cost(const std::vector<RunRecord>& records, Algorithm a, double sweep_value = 1.0);

}  // namespace sfc
