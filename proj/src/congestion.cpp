#include "sfc/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sfc/errors.hpp"
#include "sfc/oracle.hpp"

namespace sfc {

Utility Utility::alpha_fair(double alpha, double epsilon, double cap) {
  if (!(alpha >= 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("alpha-fair utility needs alpha >= 0 and epsilon > 0");
  }
  Utility u;
  u.kind = Kind::AlphaFair;
  u.alpha = alpha;
  u.epsilon = epsilon;
  u.cap = cap;
  return u;
}

Utility Utility::linear(double slope, double cap) {
  if (!(slope >= 0.0)) throw std::invalid_argument("linear utility slope must be >= 0");
  Utility u;
  u.kind = Kind::Linear;
  u.slope = slope;
  u.cap = cap;
  return u;
}

namespace {

void check_range(const Utility& u, double r) {
  if (!(r >= 0.0) || r > u.cap) {
    throw std::out_of_range("utility evaluated at " + std::to_string(r) + " outside [0, " +
                            std::to_string(u.cap) + "]");
  }
}

double clamp_rate(double cap, double fraction) { return std::clamp(cap * fraction, 0.0, cap); }

}  // namespace

double utility_eval(const Utility& u, double r) {
  check_range(u, r);
  if (u.kind == Utility::Kind::Linear) return u.slope * r;
  const double a = u.alpha;
  if (a < 1.0) return std::pow(r, 1.0 - a) / (1.0 - a);
  if (a == 1.0) return std::log(r + u.epsilon) - std::log(u.epsilon);
  return (std::pow(r + u.epsilon, 1.0 - a) - std::pow(u.epsilon, 1.0 - a)) / (1.0 - a);
}

double utility_prime(const Utility& u, double r) {
  check_range(u, r);
  if (u.kind == Utility::Kind::Linear) return u.slope;
  const double a = u.alpha;
  if (a == 0.0) return 1.0;
  if (a < 1.0) return r == 0.0 ? kInf : std::pow(r, -a);
  return std::pow(r + u.epsilon, -a);
}

ExtendedScenario extend_scenario(const Scenario& s, const std::vector<std::vector<double>>& caps,
                                 const std::vector<std::vector<Utility>>& utilities) {
  const int n = s.node_count();
  if (static_cast<int>(caps.size()) != n || static_cast<int>(utilities.size()) != n) {
    throw std::invalid_argument("caps and utilities need one row per node");
  }
  ExtendedScenario es;
  es.base = s;
  es.caps = caps;
  es.utilities = utilities;
  for (NodeId i = 0; i < n; ++i) {
    if (static_cast<int>(caps[i].size()) != s.app_count() ||
        static_cast<int>(utilities[i].size()) != s.app_count()) {
      throw std::invalid_argument("caps and utilities need one entry per application");
    }
    for (int a = 0; a < s.app_count(); ++a) {
      if (!(caps[i][a] >= 0.0) || !std::isfinite(caps[i][a])) {
        throw std::invalid_argument("admission caps must be finite and >= 0");
      }
      es.utilities[i][a].cap = caps[i][a];
    }
  }
  for (auto& row : es.base.input_rates) std::fill(row.begin(), row.end(), 0.0);
  return es;
}

ExtendedScenario extend_scenario(const Scenario& s, const Utility& utility) {
  return extend_scenario(
      s, s.input_rates,
      std::vector<std::vector<Utility>>(s.node_count(), std::vector<Utility>(s.app_count(), utility)));
}

ExtendedStrategy reject_all(const ExtendedScenario& es) {
  ExtendedStrategy phi;
  // With nothing admitted every row sits on the zero-load shortest path.
  const StageIndex stages(es.base.apps);
  FlowVector zero;
  zero.link_flow.assign(stages.size(), std::vector<double>(es.base.graph.link_count(), 0.0));
  zero.cpu_flow.assign(stages.size(), std::vector<double>(es.base.node_count(), 0.0));
  phi.physical = strategy_from_flows(es.base, zero);
  phi.gate.assign(es.physical_count(), std::vector<std::array<double, 2>>(es.base.app_count(), {0.0, 1.0}));
  return phi;
}

ExtendedStrategy admit_all(const ExtendedScenario& es, const Strategy& physical) {
  ExtendedStrategy phi;
  phi.physical = physical;
  phi.gate.assign(es.physical_count(), std::vector<std::array<double, 2>>(es.base.app_count(), {1.0, 0.0}));
  return phi;
}

Scenario admitted_scenario(const ExtendedScenario& es, const ExtendedStrategy& phi) {
  Scenario s = es.base;
  for (NodeId i = 0; i < es.physical_count(); ++i) {
    for (int a = 0; a < s.app_count(); ++a) s.input_rates[i][a] = clamp_rate(es.caps[i][a], phi.admit(i, a));
  }
  return s;
}

namespace {

ExtendedState finish_state(const ExtendedScenario& es, FlowState physical) {
  ExtendedState st;
  st.physical = std::move(physical);
  st.admitted.assign(es.physical_count(), std::vector<double>(es.base.app_count(), 0.0));
  return st;
}

void add_utilities(const ExtendedScenario& es, const ExtendedStrategy& phi, ExtendedState& st) {
  for (NodeId i = 0; i < es.physical_count(); ++i) {
    for (int a = 0; a < es.base.app_count(); ++a) {
      const Utility& u = es.utilities[i][a];
      const double r = clamp_rate(es.caps[i][a], phi.admit(i, a));
      st.admitted[i][a] = r;
      const double ur = utility_eval(u, r);
      st.utility += ur;
      st.rejection_cost += utility_eval(u, es.caps[i][a]) - ur;
    }
  }
  st.total_cost = st.physical.total_cost + st.rejection_cost;
  st.utility_minus_cost = st.utility - st.physical.total_cost;
}

}  // namespace

ExtendedState evaluate(const ExtendedScenario& es, const ExtendedStrategy& phi) {
  ExtendedState st = finish_state(es, compute_flows(admitted_scenario(es, phi), phi.physical));
  add_utilities(es, phi, st);
  return st;
}

ExtendedSnapshot extended_snapshot(const ExtendedScenario& es, const ExtendedStrategy& phi) {
  ExtendedSnapshot snap;
  const Scenario s = admitted_scenario(es, phi);
  snap.physical = snapshot(s, phi.physical);
  snap.state = finish_state(es, snap.physical.state);
  add_utilities(es, phi, snap.state);
  const StageIndex stages(s.apps);
  snap.gate_delta.assign(es.physical_count(), std::vector<std::array<double, 2>>(s.app_count()));
  for (NodeId i = 0; i < es.physical_count(); ++i) {
    for (int a = 0; a < s.app_count(); ++a) {
      snap.gate_delta[i][a] = {snap.physical.marginals.at(stages.of(a, 0), i),
                               utility_prime(es.utilities[i][a], snap.state.admitted[i][a])};
    }
  }
  return snap;
}

namespace {

void check_gates(const ExtendedScenario& es, const ExtendedStrategy& phi, const ExtendedSnapshot& snap,
                 CheckTolerance tol, OptimalityReport& rep) {
  for (NodeId i = 0; i < es.physical_count(); ++i) {
    for (int a = 0; a < es.base.app_count(); ++a) {
      if (!(es.caps[i][a] > 0.0)) continue;
      const auto& d = snap.gate_delta[i][a];
      const double row_min = std::min(d[0], d[1]);
      const NodeId to[2] = {i, es.base.apps[a].destination};
      for (int q = 0; q < 2; ++q) {
        if (phi.gate[i][a][q] > tol.tol_mass && d[q] > row_min + tol.tol) {
          rep.holds = false;
          rep.violations.push_back({es.virtual_node(i), a, 0, to[q], phi.gate[i][a][q], d[q], row_min});
        }
      }
    }
  }
}

OptimalityReport check_cc(const ExtendedScenario& es, const ExtendedStrategy& phi,
                          const ExtendedSnapshot& snap, CheckTolerance tol) {
  OptimalityReport rep = check_sufficient(admitted_scenario(es, phi), phi.physical, snap.physical, tol);
  check_gates(es, phi, snap, tol, rep);
  return rep;
}

// Synchronous update of physical and gateway rows; returns the largest gap.
std::pair<ExtendedStrategy, double> cc_step(const ExtendedScenario& es, const ExtendedStrategy& phi,
                                            const ExtendedSnapshot& snap, const GpConfig& cfg) {
  ExtendedStrategy next = phi;
  auto [physical, diag] = gp_step(admitted_scenario(es, phi), phi.physical, snap.physical, cfg);
  next.physical = std::move(physical);
  double gap = diag.max_gap;
  for (NodeId i = 0; i < es.physical_count(); ++i) {
    for (int a = 0; a < es.base.app_count(); ++a) {
      if (!(es.caps[i][a] > 0.0)) continue;
      const RowUpdate u =
          update_row(next.gate[i][a], snap.gate_delta[i][a], {}, cfg.alpha, cfg.tol, cfg.tol_mass);
      gap = std::max(gap, u.max_gap);
    }
  }
  return {std::move(next), gap};
}

}  // namespace

OptimalityReport check_sufficient_cc(const ExtendedScenario& es, const ExtendedStrategy& phi,
                                     CheckTolerance tol) {
  return check_cc(es, phi, extended_snapshot(es, phi), tol);
}

CcResult run_gp_cc(const ExtendedScenario& es, const GpConfig& config,
                   const std::optional<ExtendedStrategy>& phi0) {
  if (!(config.alpha > 0.0) || !(config.tol > 0.0)) {
    throw std::invalid_argument("stepsize and tolerance must be positive");
  }
  CcResult res;
  res.strategy = phi0 ? *phi0 : reject_all(es);
  ExtendedSnapshot snap = extended_snapshot(es, res.strategy);
  GpConfig cfg = config;

  for (int it = 0;; ++it) {
    auto [cand, gap] = cc_step(es, res.strategy, snap, cfg);
    res.trace.push_back({it, snap.state.total_cost, gap, cfg.alpha});
    if (gap <= cfg.tol && check_cc(es, res.strategy, snap, {cfg.tol, cfg.tol_mass}).holds) {
      res.converged = true;
      break;
    }
    if (it >= cfg.max_iters) break;

    bool accepted = false;
    for (;;) {
      try {
        ExtendedSnapshot next = extended_snapshot(es, cand);
        if (!cfg.adaptive || next.state.total_cost <= snap.state.total_cost) {
          res.strategy = std::move(cand);
          snap = std::move(next);
          if (cfg.adaptive) cfg.alpha = std::min(cfg.max_alpha, cfg.alpha * cfg.alpha_growth);
          accepted = true;
          break;
        }
      } catch (const CapacityExceeded&) {
        if (!cfg.adaptive) throw;
      }
      cfg.alpha /= 2;
      if (cfg.alpha < cfg.min_alpha) break;
      cand = cc_step(es, res.strategy, snap, cfg).first;
    }
    res.iterations = it + 1;
    if (!accepted) break;
  }

  res.state = snap.state;
  if (!res.converged && config.strict) {
    throw NotConverged("congestion-control gradient projection stopped after " +
                       std::to_string(res.iterations) + " iterations with gap " +
                       std::to_string(res.trace.back().max_gap));
  }
  return res;
}

void write_admission_csv(std::ostream& out, const ExtendedScenario& es, const ExtendedStrategy& phi) {
  const ExtendedSnapshot snap = extended_snapshot(es, phi);
  out << "node,app,cap,admitted,marginal_utility,marginal_cost\n";
  out.precision(17);
  for (NodeId i = 0; i < es.physical_count(); ++i) {
    for (int a = 0; a < es.base.app_count(); ++a) {
      if (!(es.caps[i][a] > 0.0)) continue;
      out << es.base.graph.name(i) << ',' << a << ',' << es.caps[i][a] << ','
          << snap.state.admitted[i][a] << ',' << snap.gate_delta[i][a][1] << ','
          << snap.gate_delta[i][a][0] << '\n';
    }
  }
}

}  // namespace sfc
