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

#include <cmath>

#include "evcoop/aumann.hpp"
#include "evcoop/scenario_io.hpp"
#include "evcoop/sweep.hpp"
#include "support/fixtures.hpp"

namespace evcoop {
namespace {

// Two aggregators sharing the small line network, three requests.
Scenario two_aggregators() {
  Scenario s = testing::line_scenario(5.0);
  s.aggregators.push_back({2, 4, {2}, {2}});
  s.vehicles.push_back({2, 2, 20.0, 5.0, 0.25, 4});
  s.chargers.push_back({2, 2, 3, 2, 20.0, {0.2}});
  s.requests.push_back({2, 4, 1, 2, 1});
  s.requests.push_back({3, 3, 2, 5, 1});
  return s;
}

TEST(Aumann, RandomStreamIsCounterBased) {
  EXPECT_EQ(uniform01(9, 1234), uniform01(9, 1234));
  EXPECT_NE(uniform01(9, 1234), uniform01(10, 1234));
  double sum = 0.0;
  for (std::uint64_t k = 0; k < 100000; ++k) {
    const double u = uniform01(3, k);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(Aumann, ModelValidation) {
  AumannModel m = AumannModel::uniform(3, 4);
  EXPECT_NO_THROW(m.validate());
  EXPECT_NEAR(m.probability({0, 1, 2, 0}), 1.0 / 81.0, 1e-15);
  EXPECT_EQ(m.cell(0, {0, 1, 2, 0}), 0b1001u);
  EXPECT_EQ(m.cell(2, {0, 1, 2, 0}), 0b0100u);
  m.prior = {0.5, 0.5, 0.0};
  EXPECT_THROW(m.validate(), Error);
  m.prior = {0.5, 0.6, -0.1};
  EXPECT_THROW(m.validate(), Error);
  m.prior = {0.2, 0.2, 0.2};
  EXPECT_THROW(m.validate(), Error);
  m.prior = {0.5, 0.5};
  EXPECT_THROW(m.validate(), Error);
}

TEST(Aumann, ExactMatchesDirectEnumeration) {
  const Scenario s = two_aggregators();
  ASSERT_EQ(format_diagnostics(validate_scenario(s)), "");
  AwareOptions opts;
  opts.prior = std::vector<double>{0.3, 0.7};
  const BenchmarkResult r = run_aggregator_aware(s, opts);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.infeasible_mass, 0.0);

  // Oracle: every one of the 8 profiles solved through coalition_value.
  std::vector<double> expect(2, 0.0), expect_e(2, 0.0);
  for (int mask = 0; mask < 8; ++mask) {
    double p = 1.0;
    std::vector<std::vector<int>> handed(2);
    for (int r = 0; r < 3; ++r) {
      const int a = (mask >> r) & 1;
      p *= a ? 0.7 : 0.3;
      handed[a].push_back(r + 1);
    }
    for (int a = 0; a < 2; ++a) {
      if (handed[a].empty()) continue;
      const CoalitionValue v = coalition_value(s, Coalition::singleton(a + 1), handed[a]);
      ASSERT_TRUE(v.feasible());
      expect[a] += p * v.cost;
      expect_e[a] += p * v.energy_kwh;
    }
  }
  for (int a = 0; a < 2; ++a) {
    EXPECT_NEAR(r.rows[a].cost, expect[a], 1e-12);
    EXPECT_NEAR(r.rows[a].energy_kwh, expect_e[a], 1e-12);
    EXPECT_EQ(r.rows[a].cost_se, 0.0);
  }
}

TEST(Aumann, SampledAgreesWithExact) {
  const Scenario s = two_aggregators();
  const BenchmarkResult exact = run_aggregator_aware(s);
  AwareOptions opts;
  opts.mode = AwareOptions::Mode::kSampled;
  opts.samples = 20000;
  opts.seed = 5;
  const BenchmarkResult mc = run_aggregator_aware(s, opts);
  EXPECT_FALSE(mc.exact);
  EXPECT_EQ(mc.samples, 20000);
  for (int a = 0; a < 2; ++a) {
    EXPECT_GT(mc.rows[a].cost_se, 0.0);
    EXPECT_LE(std::abs(mc.rows[a].cost - exact.rows[a].cost), 4.0 * mc.rows[a].cost_se);
  }
  const BenchmarkResult again = run_aggregator_aware(s, opts);
  EXPECT_EQ(again.rows[0].cost, mc.rows[0].cost);
  EXPECT_EQ(again.rows[1].energy_kwh, mc.rows[1].energy_kwh);
}

TEST(Aumann, InfeasibleProfilesAreExcludedAndReported) {
  Scenario s = two_aggregators();
  // Aggregator 2's vehicle starts empty and no charger sits at its depot.
  s.vehicles[1].initial_soc_kwh = 0.0;
  s.chargers[1].transport_node = 1;
  const BenchmarkResult r = run_aggregator_aware(s);
  EXPECT_GT(r.infeasible_mass, 0.0);
  EXPECT_LT(r.infeasible_mass, 1.0);
  EXPECT_TRUE(std::isfinite(r.total_cost()));
}

TEST(Aumann, BlindIsNoCheaperThanPooling) {
  const Scenario s = two_aggregators();
  const BenchmarkResult blind = run_aggregator_blind(s);
  const CoalitionValue grand = coalition_value(s, Coalition::grand(2));
  ASSERT_TRUE(grand.feasible());
  EXPECT_EQ(blind.mode, BenchMode::kBlind);
  EXPECT_GE(blind.total_cost(), grand.cost - 1e-9);
  EXPECT_TRUE(make_blind_problem(s).own_chargers_only);
}

TEST(Sweep, SpecParsingAndValidation) {
  const SweepSpec spec = load_sweep_spec(testing::data_path("sweep_default.spec"));
  EXPECT_EQ(spec.nodes, (std::vector<int>{9, 12, 15}));
  EXPECT_EQ(spec.aggregators, (std::vector<int>{3, 4, 5, 6}));
  EXPECT_EQ(spec.seed, 2024u);
  EXPECT_EQ(spec.requests, 8);
  SweepSpec bad = spec;
  bad.aggregators = {7};
  EXPECT_THROW(bad.validate(), Error);
  bad = spec;
  bad.nodes = {2};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Sweep, GeneratedScenariosAreValidAndNested) {
  for (int j : {9, 12, 15}) {
    const Scenario s3 = generate_sweep_scenario(j, 3, 2024, 8);
    const Scenario s6 = generate_sweep_scenario(j, 6, 2024, 8);
    EXPECT_EQ(format_diagnostics(validate_scenario(s3)), "");
    EXPECT_EQ(format_diagnostics(validate_scenario(s6)), "");
    EXPECT_EQ(s3.requests, s6.requests);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(s3.aggregators[i].depot, s6.aggregators[i].depot);
    EXPECT_EQ(serialize_scenario(s3), serialize_scenario(generate_sweep_scenario(j, 3, 2024, 8)));
  }
}

TEST(Sweep, SinglePair) {
  SweepSpec spec;
  spec.nodes = {9};
  spec.aggregators = {3, 4};
  const SweepResult r = run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) EXPECT_EQ(row.status, SolveStatus::kOptimal);
  ASSERT_EQ(r.trend.size(), 1u);
  EXPECT_EQ(r.trend[0].second, r.rows[1].energy_kwh <= r.rows[0].energy_kwh + 1e-9);
}

}  // namespace
}  // namespace evcoop
