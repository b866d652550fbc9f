#include "sfc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "sfc/errors.hpp"
#include "sfc/topology.hpp"

namespace sfc {

namespace {

std::string kind_name(CostFunction::Kind k) { return k == CostFunction::Kind::Linear ? "linear" : "queue"; }

CostFunction::Kind parse_cost_kind(const std::string& name) {
  if (name == "linear") return CostFunction::Kind::Linear;
  if (name == "queue") return CostFunction::Kind::Queue;
  throw ConfigError("unknown cost kind '" + name + "' (expected linear or queue)");
}

Json cost_to_json(const CostFunction& c) { return {{"kind", kind_name(c.kind())}, {"parameter", c.parameter()}}; }

CostFunction cost_from_json(const Json& j) {
  const double p = j.at("parameter").get<double>();
  return parse_cost_kind(j.at("kind").get<std::string>()) == CostFunction::Kind::Linear
             ? CostFunction::linear(p)
             : CostFunction::queue(p);
}

NodeId node_by_name(const Graph& g, const std::string& name) {
  const auto id = g.find(name);
  if (!id) throw ConfigError("unknown node '" + name + "'");
  return *id;
}

// Wraps parse errors of the JSON library into ConfigError.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void read_topology(const Json& j, TopologySpec& t, const std::filesystem::path& base_dir) {
  if (j.contains("kind")) t.kind = parse_topology_kind(j["kind"].get<std::string>());
  if (j.contains("nodes")) t.nodes = j["nodes"].get<int>();
  if (j.contains("edge_probability")) t.edge_probability = j["edge_probability"].get<double>();
  if (j.contains("depth")) t.depth = j["depth"].get<int>();
  if (j.contains("layers")) t.layers = j["layers"].get<std::vector<int>>();
  if (j.contains("short_hops")) t.short_hops = j["short_hops"].get<int>();
  if (j.contains("long_chords")) t.long_chords = j["long_chords"].get<int>();
  if (j.contains("path")) {
    std::filesystem::path p = j["path"].get<std::string>();
    if (p.is_relative()) {
      if (!base_dir.empty() && std::filesystem::exists(base_dir / p)) {
        p = base_dir / p;
      } else {
        p = data_dir() / p;
      }
    }
    t.path = p;
  }
}

void read_sample(const Json& j, SampleParams& p) {
  if (j.contains("apps")) p.apps = j["apps"].get<int>();
  if (j.contains("chain_length")) p.chain_length = j["chain_length"].get<int>();
  if (j.contains("sources")) p.sources = j["sources"].get<int>();
  if (j.contains("rate_range")) {
    const auto r = j["rate_range"].get<std::vector<double>>();
    if (r.size() != 2) throw ConfigError("rate_range needs two numbers");
    p.rate_range = {r[0], r[1]};
  }
  for (auto [key, spec] : {std::pair{"link", &p.link}, std::pair{"comp", &p.comp}}) {
    if (!j.contains(key)) continue;
    const Json& c = j[key];
    if (c.contains("kind")) spec->kind = parse_cost_kind(c["kind"].get<std::string>());
    if (c.contains("bound")) spec->bound = c["bound"].get<double>();
  }
  if (j.contains("packet_sizes")) p.packet_sizes = j["packet_sizes"].get<std::vector<double>>();
  if (j.contains("comp_weight")) p.comp_weight = j["comp_weight"].get<double>();
  if (j.contains("rate_scale")) p.rate_scale = j["rate_scale"].get<double>();
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  Json names = Json::array();
  for (NodeId i = 0; i < s.node_count(); ++i) names.push_back(s.graph.name(i));
  j["nodes"] = names;
  Json edges = Json::array();
  for (const Edge& e : s.graph.edges()) {
    if (e.capacity > 0.0) {
      edges.push_back({e.u, e.v, e.capacity});
    } else {
      edges.push_back({e.u, e.v});
    }
  }
  j["edges"] = edges;
  Json apps = Json::array();
  for (const auto& a : s.apps) {
    apps.push_back({{"destination", a.destination},
                    {"chain_length", a.chain_length},
                    {"packet_sizes", a.packet_sizes},
                    {"comp_weights", a.comp_weights}});
  }
  j["apps"] = apps;
  Json links = Json::array();
  for (LinkId l = 0; l < s.graph.link_count(); ++l) {
    Json c = cost_to_json(s.link_costs[l]);
    c["from"] = s.graph.link(l).from;
    c["to"] = s.graph.link(l).to;
    links.push_back(c);
  }
  j["link_costs"] = links;
  Json comps = Json::array();
  for (const auto& c : s.comp_costs) comps.push_back(c ? cost_to_json(*c) : Json(nullptr));
  j["comp_costs"] = comps;
  j["input_rates"] = s.input_rates;
  j["seed"] = s.seed;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  return guarded("scenario", [&] {
    Scenario s;
    const auto names = j.at("nodes").get<std::vector<std::string>>();
    const int n = static_cast<int>(names.size());
    std::vector<Edge> edges;
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ConfigError("edges are [u, v] or [u, v, capacity]");
      edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>(), e.size() == 3 ? e[2].get<double>() : 0.0});
    }
    try {
      s.graph = Graph(n, edges, names);
    } catch (const TopologyError& e) {
      throw ConfigError(std::string("scenario graph: ") + e.what());
    }
    int id = 0;
    for (const Json& a : j.at("apps")) {
      Application app;
      app.id = id++;
      app.destination = a.at("destination").get<NodeId>();
      app.chain_length = a.at("chain_length").get<int>();
      app.packet_sizes = a.at("packet_sizes").get<std::vector<double>>();
      app.comp_weights = a.at("comp_weights").get<std::vector<std::vector<double>>>();
      s.apps.push_back(std::move(app));
    }
    s.link_costs.assign(s.graph.link_count(), CostFunction::linear(0.0));
    std::vector<bool> seen(s.graph.link_count(), false);
    for (const Json& c : j.at("link_costs")) {
      const LinkId l = s.graph.link_id(c.at("from").get<NodeId>(), c.at("to").get<NodeId>());
      if (l < 0) throw ConfigError("link cost given for a missing link");
      s.link_costs[l] = cost_from_json(c);
      seen[l] = true;
    }
    for (bool b : seen) {
      if (!b) throw ConfigError("every directed link needs a cost");
    }
    for (const Json& c : j.at("comp_costs")) {
      s.comp_costs.push_back(c.is_null() ? std::nullopt : std::optional(cost_from_json(c)));
    }
    s.input_rates = j.at("input_rates").get<std::vector<std::vector<double>>>();
    s.seed = j.value("seed", std::uint64_t{0});
    try {
      validate_scenario(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scenario: ") + e.what());
    }
    return s;
  });
}

Json strategy_to_json(const Scenario& s, const Strategy& phi) {
  const StageIndex stages(s.apps);
  Json j = Json::object();
  for (int st = 0; st < stages.size(); ++st) {
    const StageRef ref = stages.ref(st);
    for (NodeId i = 0; i < s.node_count(); ++i) {
      const auto row = phi.row(st, i);
      Json r = Json::object();
      for (std::size_t q = 0; q < row.size(); ++q) {
        if (row[q] <= 0.0) continue;
        const NodeId to = phi.target(i, static_cast<int>(q));
        r[to == Strategy::kCpu ? std::string("cpu") : s.graph.name(to)] = row[q];
      }
      if (!r.empty()) {
        j[s.graph.name(i) + "/" + std::to_string(ref.app) + "/" + std::to_string(ref.k)] = r;
      }
    }
  }
  return j;
}

Strategy strategy_from_json(const Scenario& s, const Json& j) {
  return guarded("strategy", [&] {
    const StageIndex stages(s.apps);
    Strategy phi(s);
    for (const auto& [key, row] : j.items()) {
      const auto k_pos = key.rfind('/');
      const auto a_pos = k_pos == std::string::npos ? std::string::npos : key.rfind('/', k_pos - 1);
      if (a_pos == std::string::npos || a_pos == 0) throw ConfigError("strategy key '" + key + "' is not node/app/stage");
      const NodeId i = node_by_name(s.graph, key.substr(0, a_pos));
      int app = 0, k = 0;
      try {
        app = std::stoi(key.substr(a_pos + 1, k_pos - a_pos - 1));
        k = std::stoi(key.substr(k_pos + 1));
      } catch (const std::exception&) {
        throw ConfigError("strategy key '" + key + "' has a bad app or stage");
      }
      if (app < 0 || app >= s.app_count() || k < 0 || k > s.apps[app].chain_length) {
        throw ConfigError("strategy key '" + key + "' is out of range");
      }
      const int st = stages.of(app, k);
      for (const auto& [dir, value] : row.items()) {
        const NodeId to = dir == "cpu" ? Strategy::kCpu : node_by_name(s.graph, dir);
        if (to != Strategy::kCpu && !s.graph.has_link(i, to)) {
          throw ConfigError("strategy row '" + key + "' points at non-neighbor " + dir);
        }
        phi.set(st, i, to, value.get<double>());
      }
    }
    return phi;
  });
}

Json strategy_document(const Scenario& s, const Strategy& phi, const std::string& algorithm,
                       double total_cost) {
  return {{"algorithm", algorithm},
          {"total_cost", total_cost},
          {"scenario", scenario_to_json(s)},
          {"strategy", strategy_to_json(s, phi)}};
}

std::pair<Scenario, Strategy> load_strategy_document(const Json& doc) {
  if (!doc.is_object() || !doc.contains("scenario") || !doc.contains("strategy")) {
    throw ConfigError("strategy document needs 'scenario' and 'strategy'");
  }
  Scenario s = scenario_from_json(doc["scenario"]);
  Strategy phi = strategy_from_json(s, doc["strategy"]);
  return {std::move(s), std::move(phi)};
}

Json report_to_json(const Scenario& s, const OptimalityReport& report) {
  Json v = Json::array();
  for (const auto& x : report.violations) {
    const bool physical = x.node >= 0 && x.node < s.node_count();
    const bool dir_physical = x.direction >= 0 && x.direction < s.node_count();
    v.push_back({{"node", physical ? s.graph.name(x.node) : std::to_string(x.node)},
                 {"app", x.app},
                 {"stage", x.k},
                 {"direction", x.direction == Strategy::kCpu ? std::string("cpu")
                               : dir_physical               ? s.graph.name(x.direction)
                                                            : std::to_string(x.direction)},
                 {"fraction", x.fraction},
                 {"value", x.value},
                 {"row_min", x.row_min}});
  }
  return {{"holds", report.holds}, {"violations", v}};
}

Json metrics_to_json(const Metrics& m) {
  return {{"total_cost", m.total_cost}, {"iterations", m.iterations}, {"h_data", m.h_data}, {"h_result", m.h_result}};
}

ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  return guarded("config", [&] {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    if (j.contains("preset")) c = preset_experiment(j["preset"].get<std::string>());
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("scenario")) {
      const Json& s = j["scenario"];
      if (s.contains("topology")) read_topology(s["topology"], c.scenario.topology, base_dir);
      read_sample(s, c.scenario.sample);
    }
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j["algorithms"]) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("sweep")) {
      c.sweep.kind = parse_sweep_kind(j["sweep"].value("kind", std::string("none")));
      c.sweep.values = j["sweep"].value("values", std::vector<double>{});
    }
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("gp")) {
      const Json& g = j["gp"];
      c.gp.alpha = g.value("alpha", c.gp.alpha);
      c.gp.tol = g.value("tol", c.gp.tol);
      c.gp.tol_mass = g.value("tol_mass", c.gp.tol_mass);
      c.gp.max_iters = g.value("max_iters", c.gp.max_iters);
      c.gp.adaptive = g.value("adaptive", c.gp.adaptive);
      c.gp.strict = g.value("strict", c.gp.strict);
    }
    validate_config(c);
    return c;
  });
}

Json config_to_json(const ExperimentConfig& c) {
  const TopologySpec& t = c.scenario.topology;
  const SampleParams& p = c.scenario.sample;
  Json topo = {{"kind", to_string(t.kind)}};
  switch (t.kind) {
    case TopologyKind::ConnectedEr:
      topo["nodes"] = t.nodes;
      topo["edge_probability"] = t.edge_probability;
      break;
    case TopologyKind::BalancedTree: topo["depth"] = t.depth; break;
    case TopologyKind::Fog: topo["layers"] = t.layers; break;
    case TopologyKind::SmallWorld:
      topo["nodes"] = t.nodes;
      topo["short_hops"] = t.short_hops;
      topo["long_chords"] = t.long_chords;
      break;
    case TopologyKind::FromFile: topo["path"] = t.path.string(); break;
  }
  Json scen = {{"topology", topo},
               {"apps", p.apps},
               {"chain_length", p.chain_length},
               {"sources", p.sources},
               {"rate_range", {p.rate_range.first, p.rate_range.second}},
               {"link", {{"kind", kind_name(p.link.kind)}, {"bound", p.link.bound}}},
               {"comp", {{"kind", kind_name(p.comp.kind)}, {"bound", p.comp.bound}}},
               {"comp_weight", p.comp_weight},
               {"rate_scale", p.rate_scale}};
  if (p.packet_sizes) scen["packet_sizes"] = *p.packet_sizes;
  Json algos = Json::array();
  for (Algorithm a : c.algorithms) algos.push_back(to_string(a));
  return {{"name", c.name},
          {"scenario", scen},
          {"algorithms", algos},
          {"sweep", {{"kind", to_string(c.sweep.kind)}, {"values", c.sweep.values}}},
          {"seeds", c.seeds},
          {"output_dir", c.output_dir.string()},
          {"gp",
           {{"alpha", c.gp.alpha},
            {"tol", c.gp.tol},
            {"tol_mass", c.gp.tol_mass},
            {"max_iters", c.gp.max_iters},
            {"adaptive", c.gp.adaptive},
            {"strict", c.gp.strict}}}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json(path), path.parent_path());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iter,total_cost,max_gap,alpha\n";
  for (const auto& e : trace) {
    out << e.iter << ',' << format_double(e.total_cost) << ',' << format_double(e.max_gap) << ','
        << format_double(e.alpha) << '\n';
  }
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "scenario,algorithm,seed,sweep,feasible,converged,iterations,total_cost,normalized,h_data,"
         "h_result,error\n";
  for (const auto& r : records) {
    std::string err = r.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << r.scenario << ',' << to_string(r.algorithm) << ',' << r.seed << ',' << format_double(r.sweep_value)
        << ',' << r.feasible << ',' << r.converged << ',' << r.iterations << ','
        << format_double(r.total_cost) << ',' << format_double(r.normalized) << ','
        << format_double(r.h_data) << ',' << format_double(r.h_result) << ',' << err << '\n';
  }
}

void write_size_ratio_csv(std::ostream& out, const std::vector<SizeRatioPoint>& points) {
  out << "ratio,seed,total_cost,h_data,h_result,converged\n";
  for (const auto& p : points) {
    out << format_double(p.ratio) << ',' << p.seed << ',' << format_double(p.total_cost) << ','
        << format_double(p.h_data) << ',' << format_double(p.h_result) << ',' << p.converged << '\n';
  }
}

}  // namespace sfc
