#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sfc/flow.hpp"
#include "sfc/io.hpp"

namespace fs = std::filesystem;
using namespace sfc;

namespace {

const fs::path kConfig = fs::path(SFC_SOURCE_DIR) / "configs" / "abilene.json";

int sfcopt(const std::string& args) {
  const std::string cmd = std::string(SFCOPT_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sfcopt_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, SolveWritesArtifacts) {
  const fs::path dir = fresh_dir("solve");
  ASSERT_EQ(sfcopt("solve --algo gp --config " + kConfig.string() + " --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "strategy.json"));
  EXPECT_TRUE(fs::exists(dir / "trace.csv"));
  EXPECT_TRUE(fs::exists(dir / "metrics.json"));
  const Json doc = read_json(dir / "strategy.json");
  const auto [s, phi] = load_strategy_document(doc);
  EXPECT_NEAR(compute_flows(s, phi).total_cost, doc.at("total_cost").get<double>(), 1e-9);
  EXPECT_EQ(slurp(dir / "trace.csv").rfind("iter,total_cost,max_gap,alpha\n", 0), 0u);
}

TEST(Cli, CheckExitCodeFollowsSufficientCondition) {
  const fs::path good = fresh_dir("check_gp");
  ASSERT_EQ(sfcopt("solve --algo gp --config " + kConfig.string() + " --out " + good.string()), 0);
  EXPECT_EQ(sfcopt("check " + (good / "strategy.json").string()), 0);

  const fs::path bad = fresh_dir("check_lcof");
  ASSERT_EQ(sfcopt("solve --algo lcof --config " + kConfig.string() + " --out " + bad.string()), 0);
  EXPECT_EQ(sfcopt("check " + (bad / "strategy.json").string() + " --out " + bad.string()), 1);
  EXPECT_FALSE(read_json(bad / "violations.json").at("holds").get<bool>());
}

TEST(Cli, OracleAgreesWithSolve) {
  const fs::path dir = fresh_dir("oracle");
  ASSERT_EQ(sfcopt("solve --algo gp --config " + kConfig.string() + " --out " + dir.string()), 0);
  ASSERT_EQ(sfcopt("oracle --config " + kConfig.string() + " --out " + dir.string()), 0);
  const double t_gp = read_json(dir / "metrics.json").at("total_cost").get<double>();
  const double t_star = read_json(dir / "oracle.json").at("total_cost").get<double>();
  EXPECT_LE(std::abs(t_gp - t_star), 0.01 * t_star);
  EXPECT_EQ(slurp(dir / "flows.csv").rfind("app,k,from,to,flow\n", 0), 0u);
}

TEST(Cli, NotConvergedExitsTwo) {
  const fs::path dir = fresh_dir("cap");
  EXPECT_EQ(sfcopt("solve --algo gp --config " + kConfig.string() + " --max-iters 1 --tol 1e-14 --out " +
                   dir.string()),
            2);
  EXPECT_EQ(sfcopt("oracle --config " + kConfig.string() + " --max-iters 1 --tol 1e-15 --out " + dir.string()),
            2);
}

TEST(Cli, RunIsDeterministic) {
  const fs::path a = fresh_dir("run_a"), b = fresh_dir("run_b");
  ASSERT_EQ(sfcopt("run --config " + kConfig.string() + " --seed 2 --out " + a.string()), 0);
  ASSERT_EQ(sfcopt("run --config " + kConfig.string() + " --seed 2 --out " + b.string()), 0);
  const std::string records = slurp(a / "records.csv");
  EXPECT_EQ(records, slurp(b / "records.csv"));
  EXPECT_NE(records.find("abilene,gp,2,1,1,1,"), std::string::npos);

  for (const auto& entry : fs::directory_iterator(a / "strategies")) {
    const Json doc = read_json(entry.path());
    const auto [s, phi] = load_strategy_document(doc);
    EXPECT_NEAR(compute_flows(s, phi).total_cost, doc.at("total_cost").get<double>(), 1e-9) << entry.path();
  }
}

TEST(Cli, CongestionControl) {
  const fs::path dir = fresh_dir("cc");
  ASSERT_EQ(sfcopt("cc --config " + kConfig.string() + " --seed 3 --out " + dir.string()), 0);
  EXPECT_EQ(slurp(dir / "admission.csv").rfind("node,app,cap,admitted,marginal_utility,marginal_cost\n", 0), 0u);
  EXPECT_GE(read_json(dir / "cc.json").at("utility_minus_cost").get<double>(), 0.0);
}

TEST(Cli, InvalidInputs) {
  const fs::path dir = fresh_dir("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"algorithms": ["bfs"]})";
  EXPECT_EQ(sfcopt("solve --config " + (dir / "bad.json").string()), 1);
  EXPECT_NE(sfcopt("solve --config " + (dir / "missing.json").string()), 0);
  EXPECT_NE(sfcopt("solve --algo dijkstra --config " + kConfig.string()), 0);
  EXPECT_NE(sfcopt(""), 0);
  EXPECT_EQ(sfcopt("solve --out " + dir.string()), 1);
}
