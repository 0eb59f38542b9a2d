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

#ifndef EVCOOP_GRID_HPP
#define EVCOOP_GRID_HPP

// Linearized DistFlow on a radial feeder. Squared voltages are affine in the
// nodal loads: with losses neglected the flow on a line is the load of the
// subtree below it, and v_child = v_parent - 2 (r P + x Q) in per-unit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "evcoop/error.hpp"

namespace evcoop {

inline constexpr double kNoGridLimit = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultVMinPu2 = 0.9025;  // 0.95 pu
inline constexpr double kDefaultVMaxPu2 = 1.1025;  // 1.05 pu
inline constexpr double kVoltageTolerance = 1e-9;

struct Bus {
  int id = 0;
  // One entry (constant) or one per step.
  std::vector<double> base_load_kw{0.0};
  std::vector<double> base_load_kvar{0.0};
  double v_min_pu2 = kDefaultVMinPu2;
  double v_max_pu2 = kDefaultVMaxPu2;

  double load_kw(int step) const { return pick(base_load_kw, step); }
  double load_kvar(int step) const { return pick(base_load_kvar, step); }

  friend bool operator==(const Bus&, const Bus&) = default;

 private:
  static double pick(const std::vector<double>& v, int step) {
    if (v.empty()) return 0.0;
    return v.size() == 1 ? v.front() : v.at(static_cast<std::size_t>(step));
  }
};

struct Line {
  int from_bus = 0;
  int to_bus = 0;
  double r_pu = 0.0;
  double x_pu = 0.0;

  friend bool operator==(const Line&, const Line&) = default;
};

struct GridNetwork {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  int slack_bus = 0;
  double base_kva = 1000.0;
  // Power factor of EV charging load (1.0 = purely real).
  double ev_power_factor = 1.0;

  int bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
      if (buses[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }
  double ev_q_per_p() const {
    const double pf = ev_power_factor;
    if (pf >= 1.0) return 0.0;
    return std::sqrt(1.0 - pf * pf) / pf;
  }

  friend bool operator==(const GridNetwork&, const GridNetwork&) = default;
};

// Bus-by-step matrix of additional real load in kW.
class LoadMatrix {
 public:
  LoadMatrix() = default;
  LoadMatrix(int buses, int steps)
      : buses_(buses), steps_(steps),
        data_(static_cast<std::size_t>(buses) * steps, 0.0) {}

  int buses() const { return buses_; }
  int steps() const { return steps_; }
  double& at(int bus, int step) {
    return data_[static_cast<std::size_t>(bus) * steps_ + step];
  }
  double at(int bus, int step) const {
    return data_[static_cast<std::size_t>(bus) * steps_ + step];
  }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const LoadMatrix&, const LoadMatrix&) = default;

 private:
  int buses_ = 0;
  int steps_ = 0;
  std::vector<double> data_;
};

// Tree rooted at the slack bus. Indices are positions in GridNetwork::buses.
struct GridTopology {
  int root = -1;
  std::vector<int> parent;       // -1 at the root
  std::vector<int> parent_line;  // line feeding each bus, -1 at the root
  std::vector<int> order;        // root first; parents precede children
};

inline GridTopology grid_topology(const GridNetwork& grid) {
  const int n = static_cast<int>(grid.buses.size());
  GridTopology topo;
  topo.root = grid.bus_index(grid.slack_bus);
  if (topo.root < 0) {
    throw Error(Errc::kDanglingReference,
                "slack bus " + std::to_string(grid.slack_bus) + " not found");
  }
  if (static_cast<int>(grid.lines.size()) != n - 1) {
    throw Error(Errc::kNotRadial, std::to_string(grid.lines.size()) +
                                      " lines for " + std::to_string(n) +
                                      " buses");
  }
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t l = 0; l < grid.lines.size(); ++l) {
    const Line& line = grid.lines[l];
    const int a = grid.bus_index(line.from_bus);
    const int b = grid.bus_index(line.to_bus);
    if (a < 0 || b < 0) {
      throw Error(Errc::kDanglingReference,
                  "line " + std::to_string(l) + " references missing bus");
    }
    if (a == b) throw Error(Errc::kNotRadial, "self-loop on line " + std::to_string(l));
    adj[a].emplace_back(b, static_cast<int>(l));
    adj[b].emplace_back(a, static_cast<int>(l));
  }
  topo.parent.assign(n, -1);
  topo.parent_line.assign(n, -1);
  std::vector<char> seen(n, 0);
  topo.order.push_back(topo.root);
  seen[topo.root] = 1;
  for (std::size_t head = 0; head < topo.order.size(); ++head) {
    const int u = topo.order[head];
    for (auto [v, l] : adj[u]) {
      if (seen[v]) {
        if (v != topo.parent[u]) {
          throw Error(Errc::kNotRadial, "cycle through bus " +
                                            std::to_string(grid.buses[v].id));
        }
        continue;
      }
      seen[v] = 1;
      topo.parent[v] = u;
      topo.parent_line[v] = l;
      topo.order.push_back(v);
    }
  }
  if (static_cast<int>(topo.order.size()) != n) {
    throw Error(Errc::kNotRadial, "grid is not connected to the slack bus");
  }
  return topo;
}

struct LineFlow {
  double p_kw = 0.0;
  double q_kvar = 0.0;
};

struct GridState {
  // v_pu2[step][bus], flow[step][line] (parent to child), feasible[step].
  std::vector<std::vector<double>> v_pu2;
  std::vector<std::vector<LineFlow>> flow;
  std::vector<char> feasible;

  int steps() const { return static_cast<int>(v_pu2.size()); }
  bool all_feasible() const {
    for (char f : feasible) {
      if (!f) return false;
    }
    return true;
  }
};

inline void check_base_profiles(const GridNetwork& grid, int steps) {
  for (const Bus& b : grid.buses) {
    for (const auto* prof : {&b.base_load_kw, &b.base_load_kvar}) {
      if (prof->size() > 1 && static_cast<int>(prof->size()) < steps) {
        throw Error(Errc::kDimensionMismatch,
                    "bus " + std::to_string(b.id) + " base profile has " +
                        std::to_string(prof->size()) + " entries, need " +
                        std::to_string(steps));
      }
    }
  }
}

inline GridState solve_lindistflow(const GridNetwork& grid,
                                   const LoadMatrix& extra_load_kw) {
  const int n = static_cast<int>(grid.buses.size());
  if (extra_load_kw.buses() != n) {
    throw Error(Errc::kDimensionMismatch,
                "extra load has " + std::to_string(extra_load_kw.buses()) +
                    " rows for " + std::to_string(n) + " buses");
  }
  const int steps = extra_load_kw.steps();
  check_base_profiles(grid, steps);
  for (double v : extra_load_kw.data()) {
    if (!(v >= 0.0)) {
      throw Error(Errc::kInvalidArgument, "extra load must be nonnegative");
    }
  }
  const GridTopology topo = grid_topology(grid);
  const double q_ratio = grid.ev_q_per_p();
  const double base = grid.base_kva;

  GridState state;
  state.v_pu2.assign(steps, std::vector<double>(n, 1.0));
  state.flow.assign(steps, std::vector<LineFlow>(grid.lines.size()));
  state.feasible.assign(steps, 1);

  std::vector<double> sub_p(n), sub_q(n);
  for (int t = 0; t < steps; ++t) {
    for (int b = 0; b < n; ++b) {
      const double extra = extra_load_kw.at(b, t);
      sub_p[b] = grid.buses[b].load_kw(t) + extra;
      sub_q[b] = grid.buses[b].load_kvar(t) + extra * q_ratio;
    }
    for (auto it = topo.order.rbegin(); it != topo.order.rend(); ++it) {
      const int b = *it;
      if (topo.parent[b] < 0) continue;
      sub_p[topo.parent[b]] += sub_p[b];
      sub_q[topo.parent[b]] += sub_q[b];
      state.flow[t][topo.parent_line[b]] = {sub_p[b], sub_q[b]};
    }
    auto& v = state.v_pu2[t];
    for (int b : topo.order) {
      if (topo.parent[b] < 0) {
        v[b] = 1.0;
        continue;
      }
      const Line& line = grid.lines[topo.parent_line[b]];
      v[b] = v[topo.parent[b]] -
             2.0 * (line.r_pu * sub_p[b] + line.x_pu * sub_q[b]) / base;
    }
    for (int b = 0; b < n; ++b) {
      if (v[b] < grid.buses[b].v_min_pu2 - kVoltageTolerance ||
          v[b] > grid.buses[b].v_max_pu2 + kVoltageTolerance) {
        state.feasible[t] = 0;
      }
    }
  }
  return state;
}

// d(v_j)/d(P_b) magnitudes: sens[j][b] is the drop in squared voltage at bus
// j per kW of EV load at bus b (reactive part at the EV power factor).
inline std::vector<std::vector<double>> voltage_sensitivity(
    const GridNetwork& grid, const GridTopology& topo) {
  const int n = static_cast<int>(grid.buses.size());
  const double q_ratio = grid.ev_q_per_p();
  // Impedance sum from the root to each bus along its own path.
  std::vector<std::vector<char>> on_path(n, std::vector<char>(grid.lines.size(), 0));
  for (int b : topo.order) {
    if (topo.parent[b] < 0) continue;
    on_path[b] = on_path[topo.parent[b]];
    on_path[b][topo.parent_line[b]] = 1;
  }
  std::vector<std::vector<double>> sens(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t l = 0; l < grid.lines.size(); ++l) {
        if (on_path[j][l] && on_path[b][l]) {
          s += grid.lines[l].r_pu + grid.lines[l].x_pu * q_ratio;
        }
      }
      sens[j][b] = 2.0 * s / grid.base_kva;
    }
  }
  return sens;
}

// Largest extra real power (kW) that can be added at (bus, step) without any
// squared voltage dropping below its minimum. Exact, since voltages are
// affine in load. Returns kNoGridLimit when voltages do not depend on it.
inline double max_charging_headroom(const GridNetwork& grid,
                                    const LoadMatrix& base_extra_load,
                                    int bus, int step) {
  const GridState state = solve_lindistflow(grid, base_extra_load);
  if (step < 0 || step >= state.steps() || bus < 0 ||
      bus >= static_cast<int>(grid.buses.size())) {
    throw Error(Errc::kDimensionMismatch, "bus/step out of range");
  }
  if (!state.feasible[step]) {
    throw Error(Errc::kInfeasibleBase,
                "voltage bounds already violated at step " +
                    std::to_string(step));
  }
  const GridTopology topo = grid_topology(grid);
  const auto sens = voltage_sensitivity(grid, topo);
  double headroom = kNoGridLimit;
  for (std::size_t j = 0; j < grid.buses.size(); ++j) {
    const double s = sens[j][bus];
    if (s <= 0.0) continue;
    const double slack =
        std::max(0.0, state.v_pu2[step][j] - grid.buses[j].v_min_pu2);
    headroom = std::min(headroom, slack / s);
  }
  return headroom;
}

}  // namespace evcoop

#endif  // EVCOOP_GRID_HPP
