#include "sfc/gp.hpp"

#include <algorithm>
#include <cmath>

#include "sfc/errors.hpp"
#include "sfc/paths.hpp"

namespace sfc {

namespace {

bool is_blocked(std::span<const double> blocked, std::size_t q) {
  return !blocked.empty() && blocked[q] != 0.0;
}

bool sink_row(const Scenario& s, const StageIndex& stages, int st, NodeId i) {
  const auto [a, k] = stages.ref(st);
  return k == s.apps[a].chain_length && i == s.apps[a].destination;
}

}  // namespace

RowUpdate update_row(std::span<double> phi, std::span<const double> delta,
                     std::span<const double> blocked, double alpha, double tol, double tol_mass) {
  RowUpdate out;
  double dmin = kInf;
  for (std::size_t q = 0; q < phi.size(); ++q) {
    if (!is_blocked(blocked, q)) dmin = std::min(dmin, delta[q]);
  }
  if (!std::isfinite(dmin)) return out;

  for (std::size_t q = 0; q < phi.size(); ++q) {
    const double e = delta[q] - dmin;
    if (phi[q] > tol_mass) out.max_gap = std::max(out.max_gap, is_blocked(blocked, q) ? kInf : e);
    if (is_blocked(blocked, q)) {
      out.moved += phi[q];
      phi[q] = 0.0;
    } else if (e == 0.0) {
      ++out.minimal;
    } else if (e > tol) {
      const double r = std::min(phi[q], std::isinf(e) ? alpha : alpha * e);
      phi[q] -= r;
      out.moved += r;
    }
  }
  if (out.moved > 0.0) {
    const double share = out.moved / out.minimal;
    for (std::size_t q = 0; q < phi.size(); ++q) {
      if (!is_blocked(blocked, q) && delta[q] == dmin) phi[q] += share;
    }
  }
  return out;
}

std::pair<Strategy, StepDiagnostics> gp_step(const Scenario& s, const Strategy& phi,
                                             const MarginalSnapshot& snap, const GpConfig& config) {
  const StageIndex stages(s.apps);
  StepDiagnostics diag;
  diag.blocked = blocked_sets(s, phi, snap.state, snap.marginals);
  diag.gaps = RowTable(s, kInf);
  diag.minimal.assign(stages.size(), std::vector<int>(s.node_count(), 0));
  diag.moved.assign(stages.size(), std::vector<double>(s.node_count(), 0.0));

  Strategy next = phi;
  for (int st = 0; st < stages.size(); ++st) {
    for (NodeId i = 0; i < s.node_count(); ++i) {
      if (sink_row(s, stages, st, i)) continue;
      if (config.row_filter && !config.row_filter(st, i)) continue;
      const auto delta = snap.deltas.row(st, i);
      const auto blocked = diag.blocked.row(st, i);
      const RowUpdate u =
          update_row(next.row(st, i), delta, blocked, config.alpha, config.tol, config.tol_mass);
      diag.minimal[st][i] = u.minimal;
      diag.moved[st][i] = u.moved;
      diag.max_gap = std::max(diag.max_gap, u.max_gap);

      double dmin = kInf;
      for (std::size_t q = 0; q < delta.size(); ++q) {
        if (blocked[q] == 0.0) dmin = std::min(dmin, delta[q]);
      }
      auto gaps = diag.gaps.row(st, i);
      for (std::size_t q = 0; q < delta.size(); ++q) {
        if (blocked[q] == 0.0 && std::isfinite(delta[q])) gaps[q] = delta[q] - dmin;
      }
    }
  }
  return {std::move(next), std::move(diag)};
}

std::pair<Strategy, StepDiagnostics> gp_step(const Scenario& s, const Strategy& phi,
                                             const GpConfig& config) {
  return gp_step(s, phi, snapshot(s, phi), config);
}

GpResult run_gp(const Scenario& s, const std::optional<Strategy>& phi0, const GpConfig& config) {
  if (!(config.alpha > 0.0) || !(config.tol > 0.0)) {
    throw std::invalid_argument("stepsize and tolerance must be positive");
  }
  GpResult res;
  res.strategy = phi0 ? *phi0 : feasible_start(s, config);
  MarginalSnapshot snap = snapshot(s, res.strategy);
  GpConfig cfg = config;
  if (cfg.on_iterate) cfg.on_iterate(res.strategy, snap.state);

  for (int it = 0;; ++it) {
    auto [cand, diag] = gp_step(s, res.strategy, snap, cfg);
    res.trace.push_back({it, snap.state.total_cost, diag.max_gap, cfg.alpha});
    if (diag.max_gap <= cfg.tol &&
        check_sufficient(s, res.strategy, snap, {cfg.tol, cfg.tol_mass}).holds) {
      res.converged = true;
      break;
    }
    if (it >= cfg.max_iters) break;

    bool accepted = false;
    while (!accepted) {
      try {
        MarginalSnapshot next = snapshot(s, cand);
        const double T = snap.state.total_cost;
        if (!cfg.adaptive || next.state.total_cost <= T) {
          if (cand.max_abs_diff(res.strategy) > 0.0) ++res.productive_iterations;
          res.strategy = std::move(cand);
          snap = std::move(next);
          if (cfg.on_iterate) cfg.on_iterate(res.strategy, snap.state);
          if (cfg.adaptive) cfg.alpha = std::min(cfg.max_alpha, cfg.alpha * cfg.alpha_growth);
          accepted = true;
          break;
        }
      } catch (const CapacityExceeded&) {
        if (!cfg.adaptive) throw;
      }
      cfg.alpha /= 2;
      if (cfg.alpha < cfg.min_alpha) break;
      cand = gp_step(s, res.strategy, snap, cfg).first;
    }
    res.iterations = it + 1;
    if (!accepted) break;
  }

  res.state = snap.state;
  if (!res.converged && config.strict) {
    throw NotConverged("gradient projection stopped after " + std::to_string(res.iterations) +
                       " iterations with gap " + std::to_string(res.trace.back().max_gap));
  }
  return res;
}

Strategy repair_strategy(const Scenario& old_scenario, const Scenario& new_scenario,
                         const Strategy& phi_prev) {
  const Scenario& os = old_scenario;
  const Scenario& ns = new_scenario;
  if (os.app_count() != ns.app_count() || ns.node_count() < os.node_count()) {
    throw std::invalid_argument("scenarios must share applications and node ids");
  }
  const StageIndex stages(ns.apps);
  const MarginalSnapshot old_snap = snapshot(os, phi_prev);
  Strategy phi(ns);

  for (const auto& app : ns.apps) {
    const HopTree to_dest = shortest_tree_to(ns.graph, hop_weights(ns.graph), {app.destination});
    for (int k = 0; k <= app.chain_length; ++k) {
      const int st = stages.of(app.id, k);
      const bool final_stage = k == app.chain_length;
      for (NodeId i = 0; i < ns.node_count(); ++i) {
        if (final_stage && i == app.destination) continue;
        auto row = phi.row(st, i);
        if (i >= os.node_count()) {
          if (!final_stage && ns.has_cpu(i)) {
            row[Strategy::kCpuSlot] = 1.0;
          } else {
            phi.set(st, i, to_dest.next[i], 1.0);
          }
          continue;
        }
        const bool cpu_ok = !final_stage && ns.has_cpu(i);
        double lost = 0.0;
        NodeId best = -2;
        double best_delta = kInf;
        const auto old_row = phi_prev.row(st, i);
        for (std::size_t q = 0; q < old_row.size(); ++q) {
          const NodeId to = phi_prev.target(i, static_cast<int>(q));
          const bool kept = to == Strategy::kCpu ? cpu_ok : ns.graph.has_link(i, to);
          if (!kept) {
            lost += old_row[q];
            continue;
          }
          if (old_row[q] != 0.0) phi.set(st, i, to, old_row[q]);
          const double d = old_snap.deltas.row(st, i)[q];
          if (d < best_delta) {
            best_delta = d;
            best = to;
          }
        }
        if (lost > 0.0) {
          if (best == -2) {
            best = cpu_ok ? Strategy::kCpu : to_dest.next[i];
          }
          phi.set(st, i, best, phi.get(st, i, best) + lost);
        }
      }
    }
  }
  try {
    if (!std::isfinite(compute_flows(ns, phi).total_cost)) {
      throw NoFeasibleStrategy("repaired strategy has infinite cost");
    }
  } catch (const CapacityExceeded& e) {
    throw NoFeasibleStrategy(std::string("repaired strategy is infeasible: ") + e.what());
  } catch (const LoopDetected& e) {
    throw NoFeasibleStrategy(std::string("repaired strategy has a loop: ") + e.what());
  }
  return phi;
}

GpResult adapt(const Scenario& old_scenario, const Scenario& new_scenario, const Strategy& phi_prev,
               const GpConfig& config) {
  return run_gp(new_scenario, repair_strategy(old_scenario, new_scenario, phi_prev), config);
}

Strategy feasible_start(const Scenario& s, const GpConfig& config) {
  try {
    return init_strategy(s);
  } catch (const NoFeasibleStrategy&) {
  }
  double scale = 1.0;
  std::optional<Strategy> phi;
  for (int n = 0; n < 40 && !phi; ++n) {
    scale /= 2;
    try {
      phi = init_strategy(scale_rates(s, scale));
    } catch (const NoFeasibleStrategy&) {
    }
  }
  if (!phi) throw NoFeasibleStrategy("no scaled-down input admits a finite-cost start");

  GpConfig inner = config;
  inner.strict = false;
  inner.on_iterate = nullptr;
  inner.max_iters = std::min(config.max_iters, 2000);
  double growth = 2.0;
  for (int level = 0; scale < 1.0; ++level) {
    if (level >= 200 || growth < 1.0 + 1e-6) {
      throw NoFeasibleStrategy("rate homotopy stalled at scale " + std::to_string(scale));
    }
    *phi = run_gp(scale_rates(s, scale), *phi, inner).strategy;
    bool raised = false;
    for (int tries = 0; tries < 20 && !raised; ++tries) {
      const double next = std::min(1.0, scale * growth);
      try {
        compute_flows(scale_rates(s, next), *phi);
        scale = next;
        raised = true;
      } catch (const CapacityExceeded&) {
        growth = 1.0 + (growth - 1.0) / 2;
      }
    }
    if (!raised) throw NoFeasibleStrategy("rate homotopy stalled at scale " + std::to_string(scale));
  }
  return *phi;
}

}  // namespace sfc
