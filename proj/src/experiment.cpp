#include "sfc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "sfc/baselines.hpp"
#include "sfc/errors.hpp"

namespace sfc {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Gp: return "gp";
    case Algorithm::Spoc: return "spoc";
    case Algorithm::Lcof: return "lcof";
    case Algorithm::LprSc: return "lpr-sc";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + name + "' (expected gp, spoc, lcof or lpr-sc)");
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::Gp, Algorithm::Spoc, Algorithm::Lcof, Algorithm::LprSc};
}

AlgorithmRun run_algorithm(const Scenario& s, Algorithm a, const GpConfig& gp) {
  AlgorithmRun run;
  try {
    if (a == Algorithm::Gp) {
      GpResult r = run_gp(s, std::nullopt, gp);
      run.strategy = std::move(r.strategy);
      run.state = std::move(r.state);
      run.trace = std::move(r.trace);
      run.iterations = r.iterations;
      run.converged = r.converged;
      return run;
    }
    BaselineResult b = a == Algorithm::Spoc ? spoc(s) : a == Algorithm::Lcof ? lcof(s, gp) : lpr_sc(s);
    run.strategy = std::move(b.strategy);
    run.state = std::move(b.state);
    run.feasible = b.feasible;
    if (!b.feasible) run.error = "capacity exceeded";
  } catch (const Error& e) {
    run.strategy = Strategy(s);
    run.state = FlowState{};
    run.state.total_cost = kInf;
    run.feasible = false;
    run.converged = false;
    run.error = e.what();
  }
  return run;
}

std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::None: return "none";
    case SweepKind::RateScale: return "rate_scale";
    case SweepKind::SizeRatio: return "size_ratio";
  }
  return "?";
}

SweepKind parse_sweep_kind(const std::string& name) {
  for (SweepKind k : {SweepKind::None, SweepKind::RateScale, SweepKind::SizeRatio}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown sweep kind '" + name + "' (expected none, rate_scale or size_ratio)");
}

void validate_config(const ExperimentConfig& c) {
  if (c.algorithms.empty()) throw ConfigError("experiment needs at least one algorithm");
  if (c.seeds.empty()) throw ConfigError("experiment needs at least one seed");
  for (double v : c.sweep.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("sweep values must be positive and finite");
  }
  if (c.sweep.kind != SweepKind::None && c.sweep.values.empty()) {
    throw ConfigError("sweep of kind " + to_string(c.sweep.kind) + " has no values");
  }
  if (c.gp.tol <= 0.0 || c.gp.alpha <= 0.0 || c.gp.max_iters < 0) {
    throw ConfigError("gp settings need tol > 0, alpha > 0 and max_iters >= 0");
  }
}

std::vector<std::string> preset_names() {
  return {"connected-er", "balanced-tree", "fog", "abilene", "lhc", "geant", "sw-linear", "sw-queue"};
}

ScenarioSpec preset_scenario(const std::string& name) {
  ScenarioSpec spec;
  SampleParams& p = spec.sample;
  p.chain_length = 2;
  p.rate_range = {0.5, 1.5};
  auto set = [&](int apps, int sources, CostFunction::Kind kind, double link, double comp) {
    p.apps = apps;
    p.sources = sources;
    p.link = {kind, link};
    p.comp = {kind, comp};
  };
  auto from_file = [&](const char* file) {
    spec.topology.kind = TopologyKind::FromFile;
    spec.topology.path = data_dir() / file;
  };
  const auto queue = CostFunction::Kind::Queue;
  if (name == "connected-er") {
    spec.topology.kind = TopologyKind::ConnectedEr;
    spec.topology.nodes = 20;
    spec.topology.edge_probability = 0.1;
    set(5, 3, queue, 10, 12);
  } else if (name == "balanced-tree") {
    spec.topology.kind = TopologyKind::BalancedTree;
    spec.topology.depth = 4;
    set(5, 3, queue, 20, 15);
  } else if (name == "fog") {
    spec.topology.kind = TopologyKind::Fog;
    spec.topology.layers = {1, 3, 6, 9};
    set(5, 3, queue, 20, 17);
  } else if (name == "abilene") {
    from_file("abilene.edges");
    set(3, 3, queue, 15, 10);
  } else if (name == "lhc") {
    from_file("lhc.edges");
    set(8, 3, queue, 15, 15);
  } else if (name == "geant") {
    from_file("geant.edges");
    set(10, 5, queue, 20, 20);
  } else if (name == "sw-linear" || name == "sw-queue") {
    spec.topology.kind = TopologyKind::SmallWorld;
    spec.topology.nodes = 100;
    spec.topology.short_hops = 2;
    spec.topology.long_chords = 120;
    set(30, 8, name == "sw-queue" ? queue : CostFunction::Kind::Linear, 20, 20);
  } else {
    throw ConfigError("unknown scenario preset '" + name + "'");
  }
  return spec;
}

ExperimentConfig preset_experiment(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.scenario = preset_scenario(name);
  return c;
}

std::vector<double> ratio_packet_sizes(int chain_length, double ratio) {
  if (chain_length == 0) return {1.0};
  std::vector<double> L(chain_length + 1);
  for (int k = 0; k <= chain_length; ++k) {
    const double t = static_cast<double>(k) / chain_length;
    L[k] = (1.0 - t) * ratio + t;
  }
  return L;
}

Scenario apply_sweep(const Scenario& s, SweepKind kind, double value) {
  switch (kind) {
    case SweepKind::None: return s;
    case SweepKind::RateScale: return scale_rates(s, value);
    case SweepKind::SizeRatio: {
      Scenario out = s;
      for (auto& app : out.apps) app.packet_sizes = ratio_packet_sizes(app.chain_length, value);
      return out;
    }
  }
  return s;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& c) {
  validate_config(c);
  const std::vector<double> values =
      c.sweep.kind == SweepKind::None ? std::vector<double>{1.0} : c.sweep.values;
  std::vector<RunRecord> records;
  for (double v : values) {
    for (std::uint64_t seed : c.seeds) {
      const Scenario s = apply_sweep(build_scenario(c.scenario, seed), c.sweep.kind, v);
      for (Algorithm a : c.algorithms) {
        const auto start = std::chrono::steady_clock::now();
        AlgorithmRun run = run_algorithm(s, a, c.gp);
        RunRecord r;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.scenario = c.name;
        r.algorithm = a;
        r.seed = seed;
        r.sweep_value = v;
        r.feasible = run.feasible;
        r.converged = run.converged;
        r.iterations = run.iterations;
        r.total_cost = run.state.total_cost;
        r.error = run.error;
        if (run.feasible) {
          const Metrics m = hop_metrics(s, run.strategy, run.state);
          r.h_data = m.h_data;
          r.h_result = m.h_result;
        }
        r.strategy = std::move(run.strategy);
        records.push_back(std::move(r));
      }
    }
  }
  normalize_records(records);
  return records;
}

void normalize_records(std::vector<RunRecord>& records) {
  std::map<std::tuple<std::string, std::uint64_t, double>, double> worst;
  for (const auto& r : records) {
    if (!std::isfinite(r.total_cost)) continue;
    double& w = worst[{r.scenario, r.seed, r.sweep_value}];
    w = std::max(w, r.total_cost);
  }
  for (auto& r : records) {
    const auto it = worst.find({r.scenario, r.seed, r.sweep_value});
    if (!std::isfinite(r.total_cost) || it == worst.end()) {
      r.normalized = kInf;
    } else {
      r.normalized = it->second > 0.0 ? r.total_cost / it->second : 1.0;
    }
  }
}

std::vector<SizeRatioPoint> size_ratio_sweep(const ExperimentConfig& c) {
  validate_config(c);
  const std::vector<double> ratios =
      c.sweep.values.empty() ? std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0} : c.sweep.values;
  std::vector<SizeRatioPoint> out;
  for (double ratio : ratios) {
    for (std::uint64_t seed : c.seeds) {
      const Scenario s = apply_sweep(build_scenario(c.scenario, seed), SweepKind::SizeRatio, ratio);
      const GpResult r = run_gp(s, std::nullopt, c.gp);
      const Metrics m = hop_metrics(s, r.strategy, r.state);
      out.push_back({ratio, seed, r.state.total_cost, m.h_data, m.h_result, r.converged});
    }
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int count_inversions(const std::vector<double>& v, bool nondecreasing) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (nondecreasing ? v[i] < v[i - 1] : v[i] > v[i - 1]) ++n;
  }
  return n;
}

double median_cost(const std::vector<RunRecord>& records, Algorithm a, double sweep_value) {
  std::vector<double> costs;
  for (const auto& r : records) {
    if (r.algorithm == a && r.sweep_value == sweep_value) costs.push_back(r.total_cost);
  }
  return median(std::move(costs));
}

}  // namespace sfc
