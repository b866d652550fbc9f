#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sfc/experiment.hpp"
#include "sfc/gp.hpp"
#include "sfc/metrics.hpp"
#include "sfc/optimality.hpp"
#include "sfc/scenario.hpp"
#include "sfc/strategy.hpp"

namespace sfc {

using Json = nlohmann::json;

// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

// Explicit scenario: node names, undirected edges, applications, per-link and
// per-node costs, input rates. Parsing throws ConfigError.
Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// Rows keyed "node/app/stage" (node by name) mapping each positive direction
// ("cpu" or a neighbor name) to its fraction. Missing rows are all zero.
Json strategy_to_json(const Scenario& s, const Strategy& phi);
Strategy strategy_from_json(const Scenario& s, const Json& j);

// Self-contained dump: {"algorithm", "total_cost", "scenario", "strategy"}.
Json strategy_document(const Scenario& s, const Strategy& phi, const std::string& algorithm,
                       double total_cost);
std::pair<Scenario, Strategy> load_strategy_document(const Json& doc);

Json report_to_json(const Scenario& s, const OptimalityReport& report);
Json metrics_to_json(const Metrics& m);

// Experiment config. "preset" names a scenario row whose fields the
// "scenario" object then overrides; relative topology paths resolve against
// base_dir first and the bundled data directory second. Throws ConfigError.
ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json config_to_json(const ExperimentConfig& c);

// Throw ConfigError on unreadable files or malformed JSON.
Json read_json(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

// iter,total_cost,max_gap,alpha
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);
// scenario,algorithm,seed,sweep,feasible,converged,iterations,total_cost,
// normalized,h_data,h_result,error
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
// ratio,seed,total_cost,h_data,h_result,converged
void write_size_ratio_csv(std::ostream& out, const std::vector<SizeRatioPoint>& points);

}  // namespace sfc
