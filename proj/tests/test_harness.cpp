// Copyright 2026 The evcoop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "evcoop/harness.hpp"
#include "support/fixtures.hpp"

namespace evcoop {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() /
            ("evcoop_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out[e.path().filename().string()] = text::read_file(e.path().string());
  }
  return out;
}

RunConfig config(const std::string& input, const fs::path& out) {
  RunConfig cfg;
  cfg.input = input;
  cfg.out_dir = out;
  return cfg;
}

TEST(Harness, SingleAggregatorGame) {
  TempDir tmp("single");
  const fs::path scn = tmp.path() / "line.scn";
  detail::write_file(scn, serialize_scenario(testing::line_scenario()));
  std::ostringstream out, err;
  EXPECT_EQ(cmd_game(config(scn.string(), tmp.path() / "out"), out, err), kExitOk) << err.str();
  const auto files = snapshot(tmp.path() / "out");
  EXPECT_EQ(files.at("coalitions.csv"),
            "coalition,value_usd,phi1,energy_kwh\n\"{1}\",0.300,0.300,1.500\n");
  EXPECT_TRUE(files.count("grand_routes.csv"));
  EXPECT_TRUE(files.count("grand_grid_state.csv"));
  EXPECT_NE(files.at("core.txt").find("nonempty"), std::string::npos);
}

TEST(Harness, CaseBGameTable) {
  TempDir tmp("caseb");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_game(config(testing::data_path("case_b.scn"), tmp.path()), out, err), kExitOk)
      << err.str();
  const auto files = snapshot(tmp.path());
  const std::string& table = files.at("coalitions.csv");
  EXPECT_EQ(table.substr(0, table.find('\n')), "coalition,value_usd,phi1,phi2,phi3,energy_kwh");
  EXPECT_NE(table.find("\"{1, 2, 3}\",4.500,"), std::string::npos) << table;
  for (const char* f : {"coalitions_full.csv", "core.txt", "core_vertices.csv", "core_simplex.csv"}) {
    EXPECT_TRUE(files.count(f)) << f;
  }
  // Grand row of the full-precision table: phi sums to the value.
  const std::string& full = files.at("coalitions_full.csv");
  const std::string row = full.substr(full.find("\"{1, 2, 3}\""));
  std::vector<double> cells;
  std::istringstream in(row.substr(row.find("\",") + 2));
  for (std::string cell; std::getline(in, cell, ',') && cells.size() < 4;) cells.push_back(std::stod(cell));
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_NEAR(cells[1] + cells[2] + cells[3], cells[0], 1e-6);
  // Reruns write byte-identical files.
  TempDir again("caseb_again");
  std::ostringstream out2, err2;
  ASSERT_EQ(cmd_game(config(testing::data_path("case_b.scn"), again.path()), out2, err2), kExitOk);
  EXPECT_EQ(snapshot(again.path()), files);
  EXPECT_EQ(out2.str(), out.str());
}

TEST(Harness, OverrideWithEmptyCore) {
  TempDir tmp("override");
  RunConfig cfg = config(testing::data_path("case_b.scn"), tmp.path());
  cfg.cfn_override = testing::data_path("empty_core.cfn");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_game(cfg, out, err), kExitEmptyCore);
  EXPECT_NE(snapshot(tmp.path()).at("core.txt").find("empty"), std::string::npos);
  EXPECT_NE(out.str().find("core: empty"), std::string::npos);
}

TEST(Harness, InfeasibleGameExit) {
  TempDir tmp("infeasible");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_game(config(std::string(EVCOOP_TEST_DATA_DIR) + "/infeasible.scn", tmp.path()), out, err),
            kExitInfeasible);
  EXPECT_NE(err.str().find("request 2"), std::string::npos) << err.str();
}

TEST(Harness, BudgetWithoutIncumbentIsNotInfeasible) {
  TempDir tmp("budget");
  RunConfig cfg = config(testing::data_path("case_b.scn"), tmp.path());
  cfg.solve.node_budget = 5;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_game(cfg, out, err), kExitBudgetExhausted) << err.str();
  EXPECT_EQ(err.str().find("Infeasible"), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("NoIncumbent"), std::string::npos) << err.str();
  const auto files = snapshot(tmp.path());
  EXPECT_NE(files.at("core.txt").find("no incumbent within budget"), std::string::npos);
  EXPECT_NE(files.at("coalitions_full.csv").find("budget_exhausted"), std::string::npos);
}

TEST(Harness, ShapleyFromFile) {
  std::ostringstream out, err;
  RunConfig cfg;
  cfg.input = testing::data_path("table3.cfn");
  EXPECT_EQ(cmd_shapley_file(cfg, out, err), kExitOk);
  EXPECT_NE(out.str().find("shapley: -0.062 0.829 0.614"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("shapley in core: yes"), std::string::npos);

  std::ostringstream out2, err2;
  cfg.input = std::string(EVCOOP_TEST_DATA_DIR) + "/missing_13.cfn";
  EXPECT_EQ(cmd_shapley_file(cfg, out2, err2), kExitUsage);
  EXPECT_NE(err2.str().find("{1, 3}"), std::string::npos);

  std::ostringstream out3, err3;
  cfg.input = testing::data_path("empty_core.cfn");
  EXPECT_EQ(cmd_shapley_file(cfg, out3, err3), kExitEmptyCore);
}

TEST(Harness, SweepSinglePairIsDeterministic) {
  TempDir tmp("sweep");
  const fs::path spec = tmp.path() / "one.spec";
  detail::write_file(spec, "[sweep]\nnodes=9 aggregators=3 seed=2024 requests=8\n");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(config(spec.string(), tmp.path() / "a"), out, err), kExitOk);
  ASSERT_EQ(cmd_sweep(config(spec.string(), tmp.path() / "b"), out, err), kExitOk);
  const auto a = snapshot(tmp.path() / "a");
  EXPECT_EQ(a, snapshot(tmp.path() / "b"));
  EXPECT_EQ(a.at("sweep_trend.csv"), "nodes,energy_non_increasing\n9,1\n");
  EXPECT_EQ(a.at("sweep.csv").rfind("nodes,aggregators,status,cost_usd,energy_kwh\n9,3,optimal,", 0), 0u);
}

TEST(Harness, BenchBlindAndSampledAware) {
  TempDir tmp("bench");
  RunConfig cfg = config(testing::data_path("case_b.scn"), tmp.path());
  cfg.mode = BenchMode::kBlind;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_bench(cfg, out, err), kExitOk);
  const auto files = snapshot(tmp.path());
  EXPECT_NE(files.at("bench_blind_meta.txt").find("status=optimal"), std::string::npos);

  cfg.mode = BenchMode::kAware;
  cfg.samples = 500;
  cfg.seed = 3;
  EXPECT_EQ(cmd_bench(cfg, out, err), kExitOk);
  const std::string first = text::read_file((tmp.path() / "bench_aware_full.csv").string());
  EXPECT_EQ(cmd_bench(cfg, out, err), kExitOk);
  EXPECT_EQ(text::read_file((tmp.path() / "bench_aware_full.csv").string()), first);
  EXPECT_NE(text::read_file((tmp.path() / "bench_aware_meta.txt").string()).find("exact=0"),
            std::string::npos);
}

TEST(Harness, IngestWritesRequests) {
  TempDir tmp("ingest");
  IngestConfig cfg;
  cfg.csv = std::string(EVCOOP_TEST_DATA_DIR) + "/trips_fixture.csv";
  cfg.scenario = testing::data_path("case_b.scn");
  cfg.window_start = "2016-06-01 06:00";
  cfg.window_end = "2016-06-01 10:00";
  cfg.box = {40.6, 40.8, -74.1, -73.9};
  cfg.out_dir = tmp.path();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_ingest(cfg, out, err), kExitOk);
  const std::string reqs = text::read_file((tmp.path() / "requests.scn").string());
  EXPECT_EQ(reqs,
            "[requests]\n"
            "id=1 origin=1 destination=7 earliest=0 passengers=1\n"
            "id=2 origin=12 destination=2 earliest=6 passengers=2\n"
            "id=3 origin=6 destination=11 earliest=15 passengers=1\n"
            "id=4 origin=9 destination=4 earliest=9 passengers=3\n");
  cfg.window_end = "bad";
  EXPECT_EQ(cmd_ingest(cfg, out, err), kExitUsage);
}

}  // namespace
}  // namespace evcoop
