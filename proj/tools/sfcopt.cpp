#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sfc/congestion.hpp"
#include "sfc/errors.hpp"
#include "sfc/experiment.hpp"
#include "sfc/io.hpp"
#include "sfc/metrics.hpp"
#include "sfc/optimality.hpp"
#include "sfc/oracle.hpp"

namespace fs = std::filesystem;
using namespace sfc;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string algo = "gp";
  std::optional<double> tol;
  std::optional<double> alpha;
  std::optional<int> max_iters;
  std::string format = "csv";
  std::string strategy;
  double utility_alpha = 1.0;
};

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

ExperimentConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  ExperimentConfig c = load_config(o.config);
  if (o.seed) c.seeds = {*o.seed};
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.tol) c.gp.tol = *o.tol;
  if (o.alpha) c.gp.alpha = *o.alpha;
  if (o.max_iters) c.gp.max_iters = *o.max_iters;
  validate_config(c);
  return c;
}

fs::path out_dir(const ExperimentConfig& c) { return c.output_dir.empty() ? fs::path(".") : c.output_dir; }

int cmd_run(const Options& o) {
  const ExperimentConfig c = load(o);
  const fs::path dir = out_dir(c);
  if (c.sweep.kind == SweepKind::SizeRatio) {
    const auto points = size_ratio_sweep(c);
    if (o.format == "json") {
      Json j = Json::array();
      for (const auto& p : points) {
        j.push_back({{"ratio", p.ratio}, {"seed", p.seed}, {"total_cost", p.total_cost},
                     {"h_data", p.h_data}, {"h_result", p.h_result}, {"converged", p.converged}});
      }
      write_json(dir / "size_ratio.json", j);
    } else {
      auto out = open_out(dir / "size_ratio.csv");
      write_size_ratio_csv(out, points);
    }
    std::map<double, std::vector<double>> h;
    for (const auto& p : points) h[p.ratio].push_back(p.h_data);
    for (const auto& [ratio, v] : h) std::printf("ratio %-6g median H_data %.4f\n", ratio, median(v));
    return 0;
  }

  const auto records = run_experiment(c);
  if (o.format == "json") {
    Json j = Json::array();
    for (const auto& r : records) {
      j.push_back({{"scenario", r.scenario}, {"algorithm", to_string(r.algorithm)}, {"seed", r.seed},
                   {"sweep", r.sweep_value}, {"feasible", r.feasible}, {"converged", r.converged},
                   {"iterations", r.iterations}, {"total_cost", format_double(r.total_cost)},
                   {"normalized", format_double(r.normalized)}, {"h_data", r.h_data},
                   {"h_result", r.h_result}, {"error", r.error}});
    }
    write_json(dir / "records.json", j);
  } else {
    auto out = open_out(dir / "records.csv");
    write_records_csv(out, records);
  }
  for (const auto& r : records) {
    if (!r.feasible) continue;
    const Scenario s = apply_sweep(build_scenario(c.scenario, r.seed), c.sweep.kind, r.sweep_value);
    const std::string name = r.scenario + "_" + to_string(r.algorithm) + "_s" + std::to_string(r.seed) + "_v" +
                             format_double(r.sweep_value) + ".json";
    write_json(dir / "strategies" / name, strategy_document(s, r.strategy, to_string(r.algorithm), r.total_cost));
  }

  std::map<double, bool> values;
  for (const auto& r : records) values[r.sweep_value] = true;
  for (const auto& [v, _] : values) {
    for (Algorithm a : c.algorithms) {
      std::printf("%-14s sweep %-6g %-7s median T %s\n", c.name.c_str(), v, to_string(a).c_str(),
                  format_double(median_cost(records, a, v)).c_str());
    }
  }
  return 0;
}

int cmd_solve(const Options& o) {
  const ExperimentConfig c = load(o);
  const Scenario s = build_scenario(c.scenario, c.seeds.front());
  const Algorithm algo = parse_algorithm(o.algo);
  const AlgorithmRun run = run_algorithm(s, algo, c.gp);
  if (!run.feasible) {
    std::fprintf(stderr, "%s: no feasible strategy: %s\n", o.algo.c_str(), run.error.c_str());
    return 1;
  }
  const fs::path dir = out_dir(c);
  write_json(dir / "strategy.json", strategy_document(s, run.strategy, o.algo, run.state.total_cost));
  if (o.format == "json") {
    Json j = Json::array();
    for (const auto& e : run.trace) {
      j.push_back({{"iter", e.iter}, {"total_cost", e.total_cost}, {"max_gap", e.max_gap}, {"alpha", e.alpha}});
    }
    write_json(dir / "trace.json", j);
  } else {
    auto out = open_out(dir / "trace.csv");
    write_trace_csv(out, run.trace);
  }
  Metrics m = hop_metrics(s, run.strategy, run.state);
  m.iterations = run.iterations;
  write_json(dir / "metrics.json", metrics_to_json(m));
  std::printf("%s T = %s after %d iterations (H_data %.4f, H_result %.4f)\n", o.algo.c_str(),
              format_double(run.state.total_cost).c_str(), run.iterations, m.h_data, m.h_result);
  if (!run.converged) {
    std::fprintf(stderr, "gp did not converge within %d iterations\n", c.gp.max_iters);
    return 2;
  }
  return 0;
}

int cmd_check(const Options& o) {
  const auto [s, phi] = load_strategy_document(read_json(o.strategy));
  const auto bad = validate_strategy(s, phi);
  if (!bad.empty()) {
    std::fprintf(stderr, "invalid strategy at node %d app %d stage %d: %s\n", bad[0].node, bad[0].app, bad[0].k,
                 bad[0].what.c_str());
    return 1;
  }
  CheckTolerance tol;
  if (o.tol) tol.tol = *o.tol;
  const OptimalityReport report = check_sufficient(s, phi, tol);
  const Json j = report_to_json(s, report);
  if (!o.out.empty()) {
    write_json(fs::path(o.out) / "violations.json", j);
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return report.holds ? 0 : 1;
}

int cmd_oracle(const Options& o) {
  const ExperimentConfig c = load(o);
  const Scenario s = build_scenario(c.scenario, c.seeds.front());
  OracleConfig oc;
  if (o.tol) oc.tol = *o.tol;
  if (o.max_iters) oc.max_iters = *o.max_iters;
  const OracleResult r = solve_flow_domain(s, oc);
  const fs::path dir = out_dir(c);
  auto out = open_out(dir / "flows.csv");
  write_flows_csv(out, s, r.flows);
  write_json(dir / "oracle.json", {{"total_cost", r.total_cost}, {"gap", r.gap}, {"iterations", r.iterations}});
  std::printf("oracle T* = %s (gap %.3g, %d iterations)\n", format_double(r.total_cost).c_str(), r.gap,
              r.iterations);
  return 0;
}

int cmd_cc(const Options& o) {
  const ExperimentConfig c = load(o);
  const Scenario s = build_scenario(c.scenario, c.seeds.front());
  const ExtendedScenario es = extend_scenario(s, Utility::alpha_fair(o.utility_alpha));
  const CcResult r = run_gp_cc(es, c.gp);
  const fs::path dir = out_dir(c);
  {
    auto out = open_out(dir / "admission.csv");
    write_admission_csv(out, es, r.strategy);
  }
  {
    auto out = open_out(dir / "trace.csv");
    write_trace_csv(out, r.trace);
  }
  write_json(dir / "cc.json", {{"utility", r.state.utility},
                               {"network_cost", r.state.physical.total_cost},
                               {"utility_minus_cost", r.state.utility_minus_cost},
                               {"iterations", r.iterations},
                               {"converged", r.converged}});
  std::printf("utility - cost = %s after %d iterations\n", format_double(r.state.utility_minus_cost).c_str(),
              r.iterations);
  if (!r.converged) {
    std::fprintf(stderr, "congestion control did not converge within %d iterations\n", c.gp.max_iters);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint forwarding and computation placement for service chains"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "scenario seed (overrides the config seeds)");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--tol", o.tol, "convergence tolerance");
    sub->add_option("--alpha", o.alpha, "initial gradient projection stepsize");
    sub->add_option("--max-iters", o.max_iters, "iteration cap");
  };

  auto* run = app.add_subcommand("run", "run an experiment config");
  add_common(run);
  run->add_option("--format", o.format, "records format")->check(CLI::IsMember({"csv", "json"}));

  auto* solve = app.add_subcommand("solve", "solve one scenario and dump the strategy");
  add_common(solve);
  solve->add_option("--algo", o.algo, "algorithm")->check(CLI::IsMember({"gp", "spoc", "lcof", "lpr-sc"}));
  solve->add_option("--format", o.format, "trace format")->check(CLI::IsMember({"csv", "json"}));

  auto* check = app.add_subcommand("check", "verify the sufficient optimality condition of a dumped strategy");
  check->add_option("strategy", o.strategy, "strategy.json written by solve")->required()->check(CLI::ExistingFile);
  check->add_option("--tol", o.tol, "marginal tolerance");
  check->add_option("--out", o.out, "write violations.json here instead of stdout");

  auto* oracle = app.add_subcommand("oracle", "flow-domain optimum of one scenario");
  add_common(oracle);

  auto* cc = app.add_subcommand("cc", "utility-based congestion control on one scenario");
  add_common(cc);
  cc->add_option("--utility-alpha", o.utility_alpha, "alpha-fairness parameter of the utilities");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(o);
    if (*solve) return cmd_solve(o);
    if (*check) return cmd_check(o);
    if (*oracle) return cmd_oracle(o);
    if (*cc) return cmd_cc(o);
  } catch (const NotConverged& e) {
    std::fprintf(stderr, "not converged: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
