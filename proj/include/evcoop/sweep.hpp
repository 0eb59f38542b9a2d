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

#ifndef EVCOOP_SWEEP_HPP
#define EVCOOP_SWEEP_HPP

// Synthetic scenarios for the (node count, aggregator count) sweep.
//
// Generator, for J nodes, n aggregators and a seed:
//   * customer nodes 1..J on a grid with 3 rows (row-major), 2 km and one
//     step between neighbours;
//   * depots: the first n nodes of a farthest-point ordering that starts at
//     node 1 (ties to the lower id), so depot sets are nested in n;
//   * aggregator i owns one vehicle and one charger at its depot; charger i
//     feeds bus i+1, a lateral off the slack bus;
//   * requests depend only on (J, seed, request count): origin and destination
//     drawn uniformly from distinct nodes, earliest pickup step uniform in
//     [0, 16).

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "evcoop/aumann.hpp"
#include "evcoop/record_format.hpp"
#include "evcoop/routing_solver.hpp"
#include "evcoop/scenario.hpp"

namespace evcoop {

inline constexpr int kMaxSweepAggregators = 6;

struct SweepSpec {
  std::vector<int> nodes{9, 12, 15};
  std::vector<int> aggregators{3, 4, 5, 6};
  std::uint64_t seed = 2024;
  int requests = 8;

  void validate() const {
    if (nodes.empty() || aggregators.empty()) {
      throw Error(Errc::kInvalidArgument, "sweep needs node and aggregator counts");
    }
    if (requests < 0 || requests > kMaxBenchmarkRequests) {
      throw Error(Errc::kInvalidArgument, "requests must be in 0..31");
    }
    for (int n : aggregators) {
      if (n < 1 || n > kMaxSweepAggregators) {
        throw Error(Errc::kPlayerCountOutOfRange, "aggregator counts must be in 1..6");
      }
      for (int j : nodes) {
        if (j < n) {
          throw Error(Errc::kInvalidArgument, "node count " + std::to_string(j) +
                                                  " below aggregator count " + std::to_string(n));
        }
      }
    }
    for (int j : nodes) {
      if (j < 2) throw Error(Errc::kInvalidArgument, "node counts must be at least 2");
    }
  }
};

inline SweepSpec parse_sweep_spec(std::string_view content) {
  const text::Document doc = text::parse_document(content);
  const text::Section* sec = doc.find("sweep");
  if (!sec || sec->records.empty()) throw Error(Errc::kParse, "missing [sweep] record");
  const text::Record& r = sec->records.front();
  SweepSpec spec;
  if (r.has("nodes")) spec.nodes = text::parse_int_list(r, "nodes");
  if (r.has("aggregators")) spec.aggregators = text::parse_int_list(r, "aggregators");
  spec.seed = static_cast<std::uint64_t>(text::parse_int_or(r, "seed", 2024));
  spec.requests = static_cast<int>(text::parse_int_or(r, "requests", 8));
  spec.validate();
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  return parse_sweep_spec(text::read_file(path));
}

namespace detail {

inline std::pair<int, int> grid_coords(int node, int cols) {
  return {(node - 1) / cols, (node - 1) % cols};
}

// Farthest-point order over grid nodes by Manhattan hop distance.
inline std::vector<int> farthest_point_order(int j, int cols) {
  std::vector<int> order{1};
  std::vector<int> dist(j + 1, 1 << 30);
  while (static_cast<int>(order.size()) < j) {
    const auto [lr, lc] = grid_coords(order.back(), cols);
    int best = -1;
    for (int v = 1; v <= j; ++v) {
      const auto [r, c] = grid_coords(v, cols);
      dist[v] = std::min(dist[v], std::abs(r - lr) + std::abs(c - lc));
    }
    for (int v = 1; v <= j; ++v) {
      if (std::find(order.begin(), order.end(), v) != order.end()) continue;
      if (best < 0 || dist[v] > dist[best]) best = v;
    }
    order.push_back(best);
  }
  return order;
}

}  // namespace detail

inline Scenario generate_sweep_scenario(int j, int n, std::uint64_t seed, int requests) {
  Scenario s;
  s.horizon_steps = 48;
  s.step_minutes = 15;
  const int cols = (j + 2) / 3;
  for (int v = 1; v <= j; ++v) s.transport.nodes.push_back({v, NodeKind::kCustomer, {}, {}, {}});
  for (int v = 1; v <= j; ++v) {
    const auto [r, c] = detail::grid_coords(v, cols);
    if (c + 1 < cols && v + 1 <= j) s.transport.edges.push_back({v, v + 1, 2.0, 1, false});
    if (v + cols <= j) s.transport.edges.push_back({v, v + cols, 2.0, 1, false});
    (void)r;
  }

  s.grid.slack_bus = 1;
  s.grid.buses.push_back(Bus{1, {0.0}, {0.0}, kDefaultVMinPu2, kDefaultVMaxPu2});
  const std::vector<int> depots = detail::farthest_point_order(j, cols);
  for (int i = 1; i <= n; ++i) {
    const int depot = depots[i - 1];
    s.transport.nodes[depot - 1].kind = NodeKind::kDepot;
    s.aggregators.push_back({i, depot, {i}, {i}});
    s.vehicles.push_back({i, i, 30.0, 8.0, 0.2, 4});
    s.chargers.push_back({i, i, depot, i + 1, 50.0, {0.25}});
    s.grid.buses.push_back(Bus{i + 1, {100.0}, {25.0}, kDefaultVMinPu2, kDefaultVMaxPu2});
    s.grid.lines.push_back({1, i + 1, 0.02, 0.04});
  }

  // Requests from their own stream so they do not depend on n.
  std::uint64_t k = 0;
  auto draw = [&](int lo, int hi) {  // uniform in [lo, hi)
    const double u = uniform01(seed ^ (0x5157ull * static_cast<std::uint64_t>(j)), k++);
    return lo + std::min(hi - lo - 1, static_cast<int>(u * (hi - lo)));
  };
  for (int r = 1; r <= requests; ++r) {
    const int o = draw(1, j + 1);
    int d = draw(1, j);
    if (d >= o) ++d;
    s.requests.push_back({r, o, d, draw(0, 16), 1});
  }
  std::stable_sort(s.requests.begin(), s.requests.end(), [](const Request& a, const Request& b) {
    return a.earliest_pickup_step < b.earliest_pickup_step;
  });
  for (int r = 0; r < requests; ++r) s.requests[r].id = r + 1;
  return s;
}

struct SweepRow {
  int nodes = 0;
  int aggregators = 0;
  SolveStatus status = SolveStatus::kOptimal;
  double cost = 0.0;
  double energy_kwh = 0.0;
  long long solver_nodes = 0;
  std::string certificate;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Per node count: grand-coalition energy non-increasing in n (feasible cells).
  std::vector<std::pair<int, bool>> trend;
};

inline SweepResult run_sweep(const SweepSpec& spec, const SolveOptions& opts = {}) {
  spec.validate();
  SweepResult out;
  std::vector<int> ns = spec.aggregators;
  std::sort(ns.begin(), ns.end());
  for (int j : spec.nodes) {
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int n : ns) {
      const Scenario s = generate_sweep_scenario(j, n, spec.seed, spec.requests);
      require_valid(s);
      const CoalitionValue v = coalition_value(s, Coalition::grand(n), std::nullopt, opts);
      SweepRow row{j, n, v.status, v.cost, v.energy_kwh, v.nodes, v.certificate};
      if (v.feasible()) {
        if (v.energy_kwh > prev + 1e-9) monotone = false;
        prev = v.energy_kwh;
      }
      out.rows.push_back(std::move(row));
    }
    out.trend.emplace_back(j, monotone);
  }
  return out;
}

}  // namespace evcoop

#endif  // EVCOOP_SWEEP_HPP
