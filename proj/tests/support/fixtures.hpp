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

#ifndef EVCOOP_TESTS_FIXTURES_HPP
#define EVCOOP_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "evcoop/game.hpp"
#include "evcoop/grid.hpp"
#include "evcoop/scenario.hpp"
#include "evcoop/scenario_io.hpp"

namespace evcoop::testing {

inline std::string data_path(const std::string& name) {
  return std::string(EVCOOP_DATA_DIR) + "/" + name;
}

// Line 1-2-3-4, 2 km per edge, one step each. One aggregator with depot 1,
// one vehicle and one charger at node 2 (bus 2). No grid limits by default.
inline Scenario line_scenario(double soc_kwh = 20.0) {
  Scenario s;
  s.horizon_steps = 12;
  s.step_minutes = 15;
  for (int i = 1; i <= 4; ++i) s.transport.nodes.push_back({i, i == 1 ? NodeKind::kDepot : NodeKind::kCustomer, {}, {}, {}});
  for (int i = 1; i < 4; ++i) s.transport.edges.push_back({i, i + 1, 2.0, 1, false});
  s.aggregators.push_back({1, 1, {1}, {1}});
  s.vehicles.push_back({1, 1, 20.0, soc_kwh, 0.25, 4});
  s.chargers.push_back({1, 1, 2, 2, 20.0, {0.3}});
  s.grid.slack_bus = 1;
  s.grid.buses.push_back(Bus{1, {0.0}, {0.0}, kDefaultVMinPu2, kDefaultVMaxPu2});
  s.grid.buses.push_back(Bus{2, {0.0}, {0.0}, kDefaultVMinPu2, kDefaultVMaxPu2});
  s.grid.lines.push_back({1, 2, 0.01, 0.02});
  s.requests.push_back({1, 2, 4, 0, 1});
  return s;
}

// Random instance inside the brute-force envelope: <= 2 vehicles,
// <= 4 requests, 12 steps, at most 2 dwell choices per charge stop.
inline Scenario random_small_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto round2 = [](double v) { return std::round(v * 100.0) / 100.0; };

  Scenario s;
  s.horizon_steps = 12;
  s.step_minutes = 15;
  s.objective.return_to_depot = uni(0, 3) == 0;
  const int nn = uni(4, 5);
  for (int i = 1; i <= nn; ++i) s.transport.nodes.push_back({i, NodeKind::kCustomer, {}, {}, {}});
  for (int i = 1; i < nn; ++i) s.transport.edges.push_back({i, i + 1, double(uni(1, 3)), uni(1, 2), false});
  if (uni(0, 1)) s.transport.edges.push_back({nn, 1, double(uni(1, 4)), uni(1, 2), false});

  const int aggs = uni(1, 2);
  const int vehicles = aggs == 2 ? 2 : uni(1, 2);
  s.grid.slack_bus = 1;
  s.grid.base_kva = 1000.0;
  s.grid.buses.push_back(Bus{1, {0.0}, {0.0}, kDefaultVMinPu2, kDefaultVMaxPu2});
  // Base drop at bus 3 lands in [0.085, 0.097], so charging headroom there
  // ranges from a few kW to about 60 kW.
  for (int b = 2; b <= 3; ++b) {
    std::vector<double> p(12);
    for (double& x : p) x = b == 2 ? round2(real(250.0, 330.0)) : round2(real(300.0, 320.0));
    s.grid.buses.push_back(Bus{b, p, {0.0}, kDefaultVMinPu2, kDefaultVMaxPu2});
  }
  s.grid.lines.push_back({1, 2, 0.05, 0.02});
  s.grid.lines.push_back({2, 3, 0.05, 0.02});

  for (int a = 1; a <= aggs; ++a) s.aggregators.push_back({a, uni(1, nn), {}, {}});
  for (int v = 1; v <= vehicles; ++v) {
    const int owner = aggs == 2 ? v : 1;
    s.aggregators[owner - 1].vehicle_ids.push_back(v);
    s.vehicles.push_back({v, owner, 6.0, round2(real(0.4, 6.0)), 0.4, 4});
  }
  const int chargers = aggs == 2 ? 2 : uni(1, 2);
  for (int c = 1; c <= chargers; ++c) {
    const int owner = aggs == 2 ? c : 1;
    s.aggregators[owner - 1].owned_charger_ids.push_back(c);
    std::vector<double> price(12);
    for (double& x : price) x = round2(real(0.1, 0.5));
    s.chargers.push_back({c, owner, uni(1, nn), uni(2, 3), 16.0, price});
  }
  const int requests = uni(1, 4);
  for (int r = 1; r <= requests; ++r) {
    const int o = uni(1, nn);
    int d = uni(1, nn - 1);
    if (d >= o) ++d;
    s.requests.push_back({r, o, d, uni(0, 4), 1});
  }
  return s;
}

// Random radial network on n buses (bus ids 1..n, slack 1) with random
// impedances and light base loads over `steps` steps.
inline GridNetwork random_radial(std::mt19937_64& rng, int n, int steps) {
  auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  GridNetwork g;
  g.slack_bus = 1;
  g.base_kva = 1000.0;
  g.ev_power_factor = real(0.85, 1.0);
  for (int b = 1; b <= n; ++b) {
    std::vector<double> p(steps), q(steps);
    for (int t = 0; t < steps; ++t) {
      p[t] = b == 1 ? 0.0 : real(0.0, 40.0);
      q[t] = b == 1 ? 0.0 : real(0.0, 10.0);
    }
    g.buses.push_back(Bus{b, p, q, kDefaultVMinPu2, kDefaultVMaxPu2});
  }
  std::vector<int> ids(n - 1);
  for (int i = 0; i < n - 1; ++i) ids[i] = i + 2;
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<int> placed{1};
  for (int b : ids) {
    const int parent = placed[std::uniform_int_distribution<std::size_t>(0, placed.size() - 1)(rng)];
    g.lines.push_back({parent, b, real(0.0, 0.02), real(0.0, 0.03)});
    placed.push_back(b);
  }
  return g;
}

inline CharacteristicFunction random_game(std::mt19937_64& rng, int n, double lo = 0.0,
                                          double hi = 10.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  CharacteristicFunction c(n);
  for (Coalition s : coalition_iter(n)) c.set(s, d(rng), d(rng));
  return c;
}

// Average marginal contribution over all orderings of the players.
inline std::vector<double> permutation_shapley(const CharacteristicFunction& c) {
  const int n = c.players();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<double> sum(n, 0.0);
  long long count = 0;
  do {
    std::uint32_t mask = 0;
    double prev = 0.0;
    for (int p : order) {
      mask |= std::uint32_t{1} << p;
      const double cur = c.cost(Coalition(mask));
      sum[p] += cur - prev;
      prev = cur;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : sum) v /= static_cast<double>(count);
  return sum;
}

}  // namespace evcoop::testing

#endif  // EVCOOP_TESTS_FIXTURES_HPP
