#include "sfc/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace sfc {

void validate_scenario(const Scenario& s) {
  const int n = s.node_count();
  if (static_cast<int>(s.link_costs.size()) != s.graph.link_count()) {
    throw std::invalid_argument("one link cost per directed link required");
  }
  if (static_cast<int>(s.comp_costs.size()) != n) {
    throw std::invalid_argument("one (optional) CPU cost per node required");
  }
  if (static_cast<int>(s.input_rates.size()) != n) {
    throw std::invalid_argument("input rates must have one row per node");
  }
  for (const auto& row : s.input_rates) {
    if (static_cast<int>(row.size()) != s.app_count()) {
      throw std::invalid_argument("input rates must have one column per application");
    }
    for (double r : row) {
      if (!(r >= 0.0)) throw std::invalid_argument("input rates must be >= 0");
    }
  }
  for (const auto& app : s.apps) {
    if (app.chain_length < 0) throw std::invalid_argument("chain length must be >= 0");
    if (app.destination < 0 || app.destination >= n) {
      throw std::invalid_argument("application destination out of range");
    }
    if (static_cast<int>(app.packet_sizes.size()) != app.chain_length + 1) {
      throw std::invalid_argument("application " + std::to_string(app.id) +
                                  " needs K+1 packet sizes");
    }
    for (double L : app.packet_sizes) {
      if (!(L >= 0.0)) throw std::invalid_argument("packet sizes must be >= 0");
    }
    if (static_cast<int>(app.comp_weights.size()) != n) {
      throw std::invalid_argument("comp weights need one row per node");
    }
    for (const auto& row : app.comp_weights) {
      if (static_cast<int>(row.size()) != app.chain_length) {
        throw std::invalid_argument("comp weights need one entry per task");
      }
      for (double w : row) {
        if (!(w > 0.0)) throw std::invalid_argument("comp weights must be > 0");
      }
    }
  }
}

std::vector<double> default_packet_sizes(int chain_length) {
  std::vector<double> sizes(chain_length + 1);
  for (int k = 0; k <= chain_length; ++k) sizes[k] = std::max(0.0, 10.0 - 5.0 * k);
  return sizes;
}

std::vector<std::vector<double>> uniform_comp_weights(int nodes, int chain_length, double w) {
  return std::vector<std::vector<double>>(nodes, std::vector<double>(chain_length, w));
}

Scenario drop_inactive_apps(Scenario s) {
  std::vector<Application> kept;
  std::vector<int> kept_ids;
  for (int a = 0; a < s.app_count(); ++a) {
    bool active = false;
    for (int i = 0; i < s.node_count(); ++i) active = active || s.input_rates[i][a] > 0.0;
    if (active) {
      kept_ids.push_back(a);
      kept.push_back(s.apps[a]);
      kept.back().id = static_cast<int>(kept.size()) - 1;
    }
  }
  for (auto& row : s.input_rates) {
    std::vector<double> r;
    for (int a : kept_ids) r.push_back(row[a]);
    row = std::move(r);
  }
  s.apps = std::move(kept);
  return s;
}

StageIndex::StageIndex(const std::vector<Application>& apps) {
  for (const auto& app : apps) {
    offsets_.push_back(static_cast<int>(refs_.size()));
    for (int k = 0; k <= app.chain_length; ++k) refs_.push_back({app.id, k});
  }
}

namespace {

CostFunction draw_cost(const CostSpec& spec, std::mt19937_64& rng) {
  if (!(spec.bound > 0.0)) throw std::invalid_argument("cost parameter bound must be > 0");
  std::uniform_real_distribution<double> u(0.5 * spec.bound, spec.bound);
  const double x = u(rng);
  return spec.kind == CostFunction::Kind::Linear ? CostFunction::linear(x) : CostFunction::queue(x);
}

}  // namespace

Scenario sample_scenario(const Graph& topology, const SampleParams& p, std::uint64_t seed) {
  const int n = topology.node_count();
  if (p.apps < 1) throw std::invalid_argument("need at least one application");
  if (p.chain_length < 0) throw std::invalid_argument("chain length must be >= 0");
  if (p.sources < 1 || p.sources > n) {
    throw std::invalid_argument("number of sources must lie in [1, |V|]");
  }
  if (!(p.rate_range.first <= p.rate_range.second) || p.rate_range.first < 0.0) {
    throw std::invalid_argument("empty or negative rate range");
  }
  if (p.packet_sizes && static_cast<int>(p.packet_sizes->size()) != p.chain_length + 1) {
    throw std::invalid_argument("packet_sizes must have chain_length + 1 entries");
  }

  std::mt19937_64 rng(seed);
  Scenario s;
  s.graph = topology;
  s.seed = seed;

  std::uniform_int_distribution<int> pick_node(0, n - 1);
  std::uniform_real_distribution<double> pick_rate(p.rate_range.first, p.rate_range.second);
  s.input_rates.assign(n, std::vector<double>(p.apps, 0.0));
  std::vector<int> order(n);
  for (int a = 0; a < p.apps; ++a) {
    Application app;
    app.id = a;
    app.destination = pick_node(rng);
    app.chain_length = p.chain_length;
    app.packet_sizes = p.packet_sizes ? *p.packet_sizes : default_packet_sizes(p.chain_length);
    app.comp_weights = uniform_comp_weights(n, p.chain_length, p.comp_weight);
    s.apps.push_back(std::move(app));

    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int r = 0; r < p.sources; ++r) {
      s.input_rates[order[r]][a] = p.rate_scale * pick_rate(rng);
    }
  }

  for (LinkId l = 0; l < topology.link_count(); ++l) {
    const double hint = topology.capacity_hint(l);
    CostFunction c = draw_cost(p.link, rng);
    if (hint > 0.0) {
      c = p.link.kind == CostFunction::Kind::Linear ? CostFunction::linear(hint)
                                                    : CostFunction::queue(hint);
    }
    s.link_costs.push_back(c);
  }
  for (int i = 0; i < n; ++i) s.comp_costs.push_back(draw_cost(p.comp, rng));
  validate_scenario(s);
  return s;
}

Scenario build_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  const Graph g = generate_topology(spec.topology, seed);
  // Decorrelate the sampling stream from the topology stream.
  Scenario s = sample_scenario(g, spec.sample, seed * 0x9E3779B97F4A7C15ULL + 1);
  s.seed = seed;
  return s;
}

Scenario scale_rates(Scenario s, double factor) {
  for (auto& row : s.input_rates) {
    for (double& r : row) r *= factor;
  }
  return s;
}

}  // namespace sfc
