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

#ifndef EVCOOP_SCENARIO_HPP
#define EVCOOP_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "evcoop/coalition.hpp"
#include "evcoop/error.hpp"
#include "evcoop/grid.hpp"
#include "evcoop/transport.hpp"

namespace evcoop {

struct Aggregator {
  int id = 0;  // player index, 1-based
  int depot = 0;
  std::vector<int> vehicle_ids;
  std::vector<int> owned_charger_ids;

  friend bool operator==(const Aggregator&, const Aggregator&) = default;
};

struct Request {
  int id = 0;
  int origin = 0;
  int destination = 0;
  int earliest_pickup_step = 0;
  int passengers = 1;

  friend bool operator==(const Request&, const Request&) = default;
};

struct Vehicle {
  int id = 0;
  int owner = 0;
  double battery_capacity_kwh = 0.0;
  double initial_soc_kwh = 0.0;
  double consumption_kwh_per_km = 0.0;
  int seat_capacity = 4;

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

struct Charger {
  int id = 0;
  int owner = 0;
  int transport_node = 0;
  int grid_bus = 0;
  double max_rate_kw = 0.0;
  // One entry (constant) or one per step, $/kWh.
  std::vector<double> price_per_kwh{0.0};

  double price_at(int step) const {
    return price_per_kwh.size() == 1 ? price_per_kwh.front()
                                     : price_per_kwh.at(static_cast<std::size_t>(step));
  }
  double min_price() const {
    return *std::min_element(price_per_kwh.begin(), price_per_kwh.end());
  }

  friend bool operator==(const Charger&, const Charger&) = default;
};

struct ObjectiveWeights {
  double energy_price_weight = 1.0;
  double distance_weight = 0.05;  // $/km
  bool return_to_depot = false;

  friend bool operator==(const ObjectiveWeights&, const ObjectiveWeights&) = default;
};

struct Scenario {
  std::vector<Aggregator> aggregators;
  std::vector<Vehicle> vehicles;
  std::vector<Charger> chargers;
  TransportNetwork transport;
  GridNetwork grid;
  std::vector<Request> requests;
  int horizon_steps = 48;
  int step_minutes = 15;
  ObjectiveWeights objective;

  int players() const { return static_cast<int>(aggregators.size()); }
  double step_hours() const { return step_minutes / 60.0; }

  const Aggregator& aggregator(int id) const {
    for (const auto& a : aggregators) {
      if (a.id == id) return a;
    }
    throw Error(Errc::kDanglingReference, "aggregator " + std::to_string(id));
  }
  int vehicle_index(int id) const { return find_index(vehicles, id); }
  int charger_index(int id) const { return find_index(chargers, id); }

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  template <typename T>
  static int find_index(const std::vector<T>& xs, int id) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }
};

struct Diagnostic {
  Errc code;
  std::string path;  // e.g. "chargers[id=4].grid_bus"
  std::string message;
};

inline std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += std::string(to_string(d.code)) + " " + d.path + ": " + d.message + "\n";
  }
  return out;
}

namespace detail {

template <typename T>
std::string entity_path(std::string_view kind, const T& x) {
  return std::string(kind) + "[id=" + std::to_string(x.id) + "]";
}

}  // namespace detail

// Checks every scenario invariant and reports all violations at once.
inline std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  std::vector<Diagnostic> diags;
  auto report = [&](Errc code, std::string path, std::string msg) {
    diags.push_back({code, std::move(path), std::move(msg)});
  };

  // Uniqueness.
  auto check_unique = [&](std::string_view kind, const auto& xs) {
    std::set<int> seen;
    for (const auto& x : xs) {
      if (!seen.insert(x.id).second) {
        report(Errc::kDuplicateId, detail::entity_path(kind, x), "duplicate id");
      }
    }
  };
  check_unique("aggregators", s.aggregators);
  check_unique("vehicles", s.vehicles);
  check_unique("chargers", s.chargers);
  check_unique("requests", s.requests);
  check_unique("transport.nodes", s.transport.nodes);
  check_unique("grid.buses", s.grid.buses);

  const int n = s.players();
  if (n < 1 || n > kMaxPlayers) {
    report(Errc::kPlayerCountOutOfRange, "aggregators",
           std::to_string(n) + " aggregators, need 1..16");
  }
  for (int i = 1; i <= n; ++i) {
    bool found = false;
    for (const auto& a : s.aggregators) found = found || a.id == i;
    if (!found) {
      report(Errc::kDanglingReference, "aggregators",
             "aggregator ids must be 1..n; missing " + std::to_string(i));
    }
  }

  // Transport graph.
  for (std::size_t e = 0; e < s.transport.edges.size(); ++e) {
    const auto& edge = s.transport.edges[e];
    const std::string path = "transport.edges[" + std::to_string(e) + "]";
    if (s.transport.node_index(edge.from) < 0 ||
        s.transport.node_index(edge.to) < 0) {
      report(Errc::kDanglingReference, path,
             "edge " + std::to_string(edge.from) + "->" +
                 std::to_string(edge.to) + " references a missing node");
    }
    if (!(edge.distance_km > 0.0)) {
      report(Errc::kInvalidEdge, path, "distance_km must be > 0");
    }
    if (edge.from != edge.to && edge.travel_steps < 1) {
      report(Errc::kInvalidEdge, path, "travel_steps must be >= 1");
    }
  }
  const ShortestPaths sp = shortest_paths(s.transport);
  int diameter = 0;
  bool connected = !s.transport.nodes.empty();
  for (int a = 0; a < sp.n && connected; ++a) {
    for (int b = 0; b < sp.n; ++b) {
      if (!sp.reachable(a, b)) {
        report(Errc::kDisconnectedGraph, "transport",
               "node " + std::to_string(s.transport.nodes[b].id) +
                   " unreachable from node " +
                   std::to_string(s.transport.nodes[a].id));
        connected = false;
        break;
      }
      diameter = std::max(diameter, sp.travel_steps(a, b));
    }
  }

  auto node_exists = [&](int id) { return s.transport.node_index(id) >= 0; };

  // Aggregators, fleets, chargers.
  std::map<int, int> vehicle_claimed;
  for (const auto& a : s.aggregators) {
    const std::string path = detail::entity_path("aggregators", a);
    if (!node_exists(a.depot)) {
      report(Errc::kDanglingReference, path + ".depot",
             "depot node " + std::to_string(a.depot) + " not found");
    }
    if (a.vehicle_ids.empty()) {
      report(Errc::kEmptyFleet, path, "aggregator " + std::to_string(a.id) +
                                          " has no vehicles");
    }
    if (a.owned_charger_ids.empty()) {
      report(Errc::kMissingCharger, path,
             "aggregator " + std::to_string(a.id) + " owns no charger");
    }
    for (int v : a.vehicle_ids) {
      const int vi = s.vehicle_index(v);
      if (vi < 0) {
        report(Errc::kDanglingReference, path + ".vehicles",
               "vehicle " + std::to_string(v) + " not found");
        continue;
      }
      if (auto [it, fresh] = vehicle_claimed.emplace(v, a.id); !fresh) {
        report(Errc::kOverlappingFleets, path + ".vehicles",
               "vehicle " + std::to_string(v) + " also listed by aggregator " +
                   std::to_string(it->second));
      }
      if (s.vehicles[vi].owner != a.id) {
        report(Errc::kDanglingReference, path + ".vehicles",
               "vehicle " + std::to_string(v) + " has owner " +
                   std::to_string(s.vehicles[vi].owner));
      }
    }
    for (int c : a.owned_charger_ids) {
      const int ci = s.charger_index(c);
      if (ci < 0) {
        report(Errc::kDanglingReference, path + ".chargers",
               "charger " + std::to_string(c) + " not found");
      } else if (s.chargers[ci].owner != a.id) {
        report(Errc::kDanglingReference, path + ".chargers",
               "charger " + std::to_string(c) + " has owner " +
                   std::to_string(s.chargers[ci].owner));
      }
    }
  }
  for (const auto& v : s.vehicles) {
    const std::string path = detail::entity_path("vehicles", v);
    if (!vehicle_claimed.count(v.id)) {
      report(Errc::kDanglingReference, path + ".owner",
             "vehicle not listed by aggregator " + std::to_string(v.owner));
    }
    if (!(v.battery_capacity_kwh > 0.0) || !(v.initial_soc_kwh >= 0.0) ||
        v.initial_soc_kwh > v.battery_capacity_kwh) {
      report(Errc::kInvalidVehicle, path,
             "need 0 <= initial_soc_kwh <= battery_capacity_kwh");
    }
    if (!(v.consumption_kwh_per_km > 0.0)) {
      report(Errc::kInvalidVehicle, path, "consumption must be > 0");
    }
    if (v.seat_capacity < 1) {
      report(Errc::kInvalidVehicle, path, "seat_capacity must be >= 1");
    }
  }
  for (const auto& c : s.chargers) {
    const std::string path = detail::entity_path("chargers", c);
    bool owned = false;
    for (const auto& a : s.aggregators) {
      owned = owned || std::find(a.owned_charger_ids.begin(),
                                 a.owned_charger_ids.end(),
                                 c.id) != a.owned_charger_ids.end();
    }
    if (!owned) {
      report(Errc::kDanglingReference, path + ".owner",
             "charger not listed by aggregator " + std::to_string(c.owner));
    }
    if (!node_exists(c.transport_node)) {
      report(Errc::kDanglingReference, path + ".transport_node",
             "charger " + std::to_string(c.id) + " references missing node " +
                 std::to_string(c.transport_node));
    }
    if (s.grid.bus_index(c.grid_bus) < 0) {
      report(Errc::kDanglingReference, path + ".grid_bus",
             "charger " + std::to_string(c.id) + " references missing bus " +
                 std::to_string(c.grid_bus));
    }
    if (!(c.max_rate_kw > 0.0)) {
      report(Errc::kInvalidCharger, path, "max_rate_kw must be > 0");
    }
    if (c.price_per_kwh.empty() ||
        (c.price_per_kwh.size() != 1 &&
         static_cast<int>(c.price_per_kwh.size()) != s.horizon_steps)) {
      report(Errc::kInvalidCharger, path,
             "price list must have 1 or horizon_steps entries");
    }
    for (double p : c.price_per_kwh) {
      if (!(p >= 0.0)) report(Errc::kInvalidCharger, path, "negative price");
    }
  }

  // Requests and horizon.
  if (s.horizon_steps < 1 || s.step_minutes < 1) {
    report(Errc::kHorizonTooShort, "horizon",
           "horizon_steps and step_minutes must be positive");
  }
  int latest_pickup = 0;
  for (const auto& r : s.requests) {
    const std::string path = detail::entity_path("requests", r);
    if (!node_exists(r.origin) || !node_exists(r.destination)) {
      report(Errc::kDanglingReference, path,
             "request " + std::to_string(r.id) + " references a missing node");
    }
    if (r.origin == r.destination) {
      report(Errc::kInvalidRequest, path,
             "request " + std::to_string(r.id) + " has origin == destination");
    }
    if (r.earliest_pickup_step < 0 || r.earliest_pickup_step >= s.horizon_steps) {
      report(Errc::kInvalidRequest, path,
             "request " + std::to_string(r.id) +
                 " earliest_pickup_step outside horizon");
    }
    if (r.passengers < 1) {
      report(Errc::kInvalidRequest, path, "passengers must be >= 1");
    }
    latest_pickup = std::max(latest_pickup, r.earliest_pickup_step);
  }
  if (connected && !s.requests.empty() &&
      s.horizon_steps < latest_pickup + diameter) {
    report(Errc::kHorizonTooShort, "horizon",
           "horizon " + std::to_string(s.horizon_steps) +
               " steps < latest pickup " + std::to_string(latest_pickup) +
               " + diameter " + std::to_string(diameter));
  }

  // Grid.
  try {
    (void)grid_topology(s.grid);
  } catch (const Error& e) {
    report(e.code(), "grid", e.what());
  }
  for (const auto& b : s.grid.buses) {
    const std::string path = detail::entity_path("grid.buses", b);
    if (!(b.v_min_pu2 < b.v_max_pu2)) {
      report(Errc::kInvalidGrid, path, "v_min_pu2 must be < v_max_pu2");
    }
    for (const auto* prof : {&b.base_load_kw, &b.base_load_kvar}) {
      if (prof->size() != 1 &&
          static_cast<int>(prof->size()) != s.horizon_steps) {
        report(Errc::kInvalidGrid, path,
               "base load profile must have 1 or horizon_steps entries");
      }
    }
  }
  for (std::size_t l = 0; l < s.grid.lines.size(); ++l) {
    if (s.grid.lines[l].r_pu < 0.0 || s.grid.lines[l].x_pu < 0.0) {
      report(Errc::kInvalidGrid, "grid.lines[" + std::to_string(l) + "]",
             "r_pu and x_pu must be >= 0");
    }
  }
  if (!(s.grid.base_kva > 0.0) || !(s.grid.ev_power_factor > 0.0) ||
      s.grid.ev_power_factor > 1.0) {
    report(Errc::kInvalidGrid, "grid", "need base_kva > 0 and 0 < pf <= 1");
  }
  return diags;
}

// Returns the scenario unchanged when valid; throws with every diagnostic
// otherwise (the exception code is that of the first one).
inline const Scenario& require_valid(const Scenario& s) {
  auto diags = validate_scenario(s);
  if (!diags.empty()) throw Error(diags.front().code, format_diagnostics(diags));
  return s;
}

}  // namespace evcoop

#endif  // EVCOOP_SCENARIO_HPP
