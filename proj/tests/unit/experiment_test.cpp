#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "sfc/errors.hpp"
#include "sfc/experiment.hpp"
#include "sfc/flow.hpp"

using namespace sfc;
using namespace sfc::testing;

namespace {

ExperimentConfig small_abilene() {
  ExperimentConfig c = preset_experiment("abilene");
  c.seeds = {1, 2};
  return c;
}

}  // namespace

TEST(Experiment, AlgorithmNames) {
  for (Algorithm a : all_algorithms()) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_EQ(to_string(Algorithm::LprSc), "lpr-sc");
  EXPECT_THROW(parse_algorithm("dijkstra"), ConfigError);
  EXPECT_EQ(parse_sweep_kind("rate_scale"), SweepKind::RateScale);
  EXPECT_THROW(parse_sweep_kind("sizes"), ConfigError);
}

TEST(Experiment, ValidateConfig) {
  ExperimentConfig c;
  EXPECT_NO_THROW(validate_config(c));
  c.algorithms.clear();
  EXPECT_THROW(validate_config(c), ConfigError);
  c = {};
  c.seeds.clear();
  EXPECT_THROW(validate_config(c), ConfigError);
  c = {};
  c.sweep.kind = SweepKind::RateScale;
  EXPECT_THROW(validate_config(c), ConfigError);
  c.sweep.values = {1.0, -0.5};
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Experiment, PresetsMatchTableRows) {
  struct Row {
    const char* name;
    int nodes;
    int apps;
    int sources;
  };
  for (const Row& row : {Row{"connected-er", 20, 5, 3}, Row{"balanced-tree", 15, 5, 3}, Row{"fog", 19, 5, 3},
                         Row{"abilene", 11, 3, 3}, Row{"lhc", 16, 8, 3}, Row{"geant", 22, 10, 5},
                         Row{"sw-linear", 100, 30, 8}, Row{"sw-queue", 100, 30, 8}}) {
    const Scenario s = build_scenario(preset_scenario(row.name), 1);
    EXPECT_EQ(s.node_count(), row.nodes) << row.name;
    EXPECT_EQ(s.app_count(), row.apps) << row.name;
    for (const auto& app : s.apps) {
      EXPECT_EQ(app.chain_length, 2);
      EXPECT_EQ(app.packet_sizes, (std::vector<double>{10.0, 5.0, 0.0}));
      int active = 0;
      for (NodeId i = 0; i < s.node_count(); ++i) {
        const double r = s.rate(i, app.id);
        if (r > 0.0) {
          ++active;
          EXPECT_GE(r, 0.5);
          EXPECT_LE(r, 1.5);
        }
      }
      EXPECT_EQ(active, row.sources) << row.name;
    }
  }
  EXPECT_EQ(build_scenario(preset_scenario("abilene"), 3).graph.undirected_edge_count(), 14);
  EXPECT_EQ(build_scenario(preset_scenario("balanced-tree"), 3).graph.undirected_edge_count(), 14);
  EXPECT_EQ(preset_names().size(), 8u);
  EXPECT_THROW(preset_scenario("mesh"), ConfigError);
}

TEST(Experiment, RatioPacketSizes) {
  EXPECT_EQ(ratio_packet_sizes(2, 4.0), (std::vector<double>{4.0, 2.5, 1.0}));
  EXPECT_EQ(ratio_packet_sizes(1, 0.5), (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(ratio_packet_sizes(0, 8.0), (std::vector<double>{1.0}));
}

TEST(Experiment, ApplySweep) {
  const Scenario s = random_scenario(2);
  const Scenario scaled = apply_sweep(s, SweepKind::RateScale, 1.5);
  EXPECT_DOUBLE_EQ(scaled.rate(0, 0), 1.5 * s.rate(0, 0));
  const Scenario sized = apply_sweep(s, SweepKind::SizeRatio, 8.0);
  EXPECT_EQ(sized.apps[1].packet_sizes, (std::vector<double>{8.0, 4.5, 1.0}));
  EXPECT_EQ(apply_sweep(s, SweepKind::None, 3.0).input_rates, s.input_rates);
}

TEST(Experiment, RecordsAndNormalization) {
  const ExperimentConfig c = small_abilene();
  const std::vector<RunRecord> recs = run_experiment(c);
  ASSERT_EQ(recs.size(), c.seeds.size() * c.algorithms.size());
  std::map<std::uint64_t, double> worst;
  for (const auto& r : recs) {
    EXPECT_EQ(r.scenario, "abilene");
    if (std::isfinite(r.total_cost)) worst[r.seed] = std::max(worst[r.seed], r.normalized);
    if (!r.feasible) {
      EXPECT_EQ(r.total_cost, kInf);
      EXPECT_EQ(r.normalized, kInf);
    }
  }
  for (const auto& [seed, w] : worst) EXPECT_DOUBLE_EQ(w, 1.0) << "seed " << seed;
  for (std::uint64_t seed : c.seeds) {
    double gp = kInf;
    for (const auto& r : recs) {
      if (r.seed == seed && r.algorithm == Algorithm::Gp) gp = r.total_cost;
    }
    for (const auto& r : recs) {
      if (r.seed == seed) EXPECT_LE(gp, r.total_cost + 1e-9) << to_string(r.algorithm);
    }
  }
}

TEST(Experiment, RecordsReevaluateAndRepeat) {
  const ExperimentConfig c = small_abilene();
  const std::vector<RunRecord> a = run_experiment(c);
  const std::vector<RunRecord> b = run_experiment(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].total_cost, b[i].total_cost);
    EXPECT_EQ(a[i].strategy, b[i].strategy);
    if (!a[i].feasible) continue;
    const Scenario s = build_scenario(c.scenario, a[i].seed);
    EXPECT_NEAR(compute_flows(s, a[i].strategy).total_cost, a[i].total_cost, 1e-9);
  }
}

TEST(Experiment, FailuresAreRecorded) {
  ExperimentConfig c = small_abilene();
  c.algorithms = {Algorithm::Lcof, Algorithm::Gp};
  c.scenario.sample.comp.bound = 1.0;  // local workload saturates the CPUs
  const std::vector<RunRecord> recs = run_experiment(c);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_FALSE(recs[0].feasible);
  EXPECT_FALSE(recs[0].error.empty());
  EXPECT_EQ(recs[0].total_cost, kInf);
}

TEST(Experiment, RateSweepRecords) {
  ExperimentConfig c = small_abilene();
  c.algorithms = {Algorithm::Gp};
  c.sweep = {SweepKind::RateScale, {0.5, 1.0}};
  const std::vector<RunRecord> recs = run_experiment(c);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_LT(median_cost(recs, Algorithm::Gp, 0.5), median_cost(recs, Algorithm::Gp, 1.0));
}

TEST(Experiment, SizeRatioControlFixedStrategy) {
  const Scenario base = random_scenario(4);
  const Strategy phi = random_strategy(base, 11);
  double first = -1.0;
  for (double ratio : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const Scenario s = apply_sweep(base, SweepKind::SizeRatio, ratio);
    const Metrics m = hop_metrics(s, phi, compute_flows(s, phi));
    if (first < 0.0) first = m.h_data;
    EXPECT_DOUBLE_EQ(m.h_data, first);
  }
}

TEST(Experiment, SizeRatioSweepShape) {
  ExperimentConfig c = preset_experiment("abilene");
  c.seeds = {1};
  c.sweep.values = {0.5, 8.0};
  const std::vector<SizeRatioPoint> pts = size_ratio_sweep(c);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].ratio, 0.5);
  EXPECT_GT(pts[0].h_data, pts[1].h_data);
}

TEST(Experiment, MedianAndInversions) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_EQ(median({1.0, kInf, kInf}), kInf);
  EXPECT_THROW(median({}), std::invalid_argument);
  EXPECT_EQ(count_inversions({1, 2, 2, 3}), 0);
  EXPECT_EQ(count_inversions({1, 3, 2, 4, 3}), 2);
  EXPECT_EQ(count_inversions({5, 4, 4, 1}, false), 0);
  EXPECT_EQ(count_inversions({5, 6, 4, 1}, false), 1);
}
