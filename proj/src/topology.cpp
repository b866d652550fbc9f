#include "sfc/topology.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sfc/errors.hpp"

namespace sfc {

Graph connected_er(int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("connected_er needs n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (coin(rng) < p) edges.push_back({i, j});
    }
  }
  return Graph(n, edges);
}

Graph balanced_tree(int depth) {
  if (depth < 1 || depth > 20) throw std::invalid_argument("balanced_tree depth must lie in [1,20]");
  const int n = (1 << depth) - 1;
  if (n < 2) throw std::invalid_argument("balanced_tree needs at least two nodes");
  std::vector<Edge> edges;
  for (int child = 1; child < n; ++child) edges.push_back({(child - 1) / 2, child});
  return Graph(n, edges);
}

Graph fog(const std::vector<int>& layers) {
  if (layers.empty() || layers.front() != 1) {
    throw std::invalid_argument("fog layers must start with a single root");
  }
  int n = 0;
  for (int s : layers) {
    if (s < 1) throw std::invalid_argument("fog layer sizes must be positive");
    n += s;
  }
  if (n < 2) throw std::invalid_argument("fog topology needs at least two nodes");
  std::vector<Edge> edges;
  int prev_start = 0;
  int prev_size = 1;
  int start = 1;
  for (std::size_t l = 1; l < layers.size(); ++l) {
    const int size = layers[l];
    for (int c = 0; c < size; ++c) {
      // Children are spread evenly over the parents of the previous layer.
      const int parent = prev_start + static_cast<int>(static_cast<long long>(c) * prev_size / size);
      edges.push_back({parent, start + c});
      if (c > 0) edges.push_back({start + c - 1, start + c});
    }
    prev_start = start;
    prev_size = size;
    start += size;
  }
  return Graph(n, edges);
}

Graph small_world(int n, int short_hops, int long_chords, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("small_world needs n >= 3");
  if (short_hops < 1 || 2 * short_hops >= n) {
    throw std::invalid_argument("small_world short_hops must satisfy 1 <= short_hops < n/2");
  }
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (long_chords < 0 || static_cast<long long>(n) * short_hops + long_chords > max_edges) {
    throw std::invalid_argument("small_world has too many long chords");
  }
  std::set<std::pair<int, int>> present;
  std::vector<Edge> edges;
  auto add = [&](int u, int v) {
    const auto key = std::make_pair(std::min(u, v), std::max(u, v));
    if (u == v || !present.insert(key).second) return false;
    edges.push_back({key.first, key.second});
    return true;
  };
  for (int i = 0; i < n; ++i) {
    for (int h = 1; h <= short_hops; ++h) add(i, (i + h) % n);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  int added = 0;
  while (added < long_chords) {
    if (add(pick(rng), pick(rng))) ++added;
  }
  return Graph(n, edges);
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, int> ids;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  auto id_of = [&](const std::string& tok) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<int>(names.size()));
    if (inserted) names.push_back(tok);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 2 && tok.size() != 3) {
      throw TopologyError("edge list line " + std::to_string(lineno) + ": expected 'u v [capacity]'");
    }
    double cap = 0.0;
    if (tok.size() == 3) {
      char* end = nullptr;
      cap = std::strtod(tok[2].c_str(), &end);
      if (end == tok[2].c_str() || *end != '\0' || !(cap > 0.0)) {
        throw TopologyError("edge list line " + std::to_string(lineno) + ": bad capacity '" + tok[2] + "'");
      }
    }
    if (tok[0] == tok[1]) {
      throw TopologyError("edge list line " + std::to_string(lineno) + ": self-link");
    }
    const int u = id_of(tok[0]);
    const int v = id_of(tok[1]);
    edges.push_back({u, v, cap});
  }
  if (names.size() < 2) throw TopologyError("edge list defines fewer than two nodes");
  return Graph(static_cast<int>(names.size()), edges, names);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

Graph generate_topology(const TopologySpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case TopologyKind::ConnectedEr:
      return connected_er(spec.nodes, spec.edge_probability, seed);
    case TopologyKind::BalancedTree:
      return balanced_tree(spec.depth);
    case TopologyKind::Fog:
      return fog(spec.layers);
    case TopologyKind::SmallWorld:
      return small_world(spec.nodes, spec.short_hops, spec.long_chords, seed);
    case TopologyKind::FromFile:
      return load_edge_list(spec.path);
  }
  throw std::invalid_argument("unknown topology kind");
}

TopologyKind parse_topology_kind(const std::string& name) {
  if (name == "connected_er") return TopologyKind::ConnectedEr;
  if (name == "balanced_tree") return TopologyKind::BalancedTree;
  if (name == "fog") return TopologyKind::Fog;
  if (name == "small_world") return TopologyKind::SmallWorld;
  if (name == "from_file") return TopologyKind::FromFile;
  throw std::invalid_argument("unknown topology kind '" + name + "'");
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::ConnectedEr: return "connected_er";
    case TopologyKind::BalancedTree: return "balanced_tree";
    case TopologyKind::Fog: return "fog";
    case TopologyKind::SmallWorld: return "small_world";
    case TopologyKind::FromFile: return "from_file";
  }
  return "unknown";
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SFC_DATA_DIR"); env && *env) return env;
  return SFC_DATA_DIR;
}

}  // namespace sfc
