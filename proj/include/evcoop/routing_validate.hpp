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

#ifndef EVCOOP_ROUTING_VALIDATE_HPP
#define EVCOOP_ROUTING_VALIDATE_HPP

// Rechecks a RoutingSolution against the scenario from scratch, using only
// the action lists and the raw scenario data.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "evcoop/grid.hpp"
#include "evcoop/routing_model.hpp"
#include "evcoop/scenario.hpp"

namespace evcoop {

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

inline ValidationReport validate_solution(const Scenario& s, const RoutingProblem& p,
                                          const RoutingSolution& sol,
                                          double tol = 1e-6) {
  ValidationReport rep;
  auto fail = [&](std::string msg) { rep.issues.push_back(std::move(msg)); };
  auto near = [&](double a, double b) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  const double h = s.step_hours();
  const int horizon = s.horizon_steps;

  std::map<int, int> picked, dropped;  // request id -> count
  std::vector<int> expected_vehicles;
  for (int v : p.vehicles) expected_vehicles.push_back(s.vehicles[v].id);
  std::vector<int> seen_vehicles;
  LoadMatrix load(static_cast<int>(s.grid.buses.size()), horizon);
  double objective = 0.0, energy = 0.0, km_total = 0.0;
  std::map<int, std::pair<double, double>> share;  // owner -> (cost, energy)

  for (const VehicleRoute& route : sol.routes) {
    const std::string who = "vehicle " + std::to_string(route.vehicle_id);
    const int vi = s.vehicle_index(route.vehicle_id);
    if (vi < 0 || std::find(p.vehicles.begin(), p.vehicles.end(), vi) == p.vehicles.end()) {
      fail(who + ": not part of the problem");
      continue;
    }
    seen_vehicles.push_back(route.vehicle_id);
    const Vehicle& veh = s.vehicles[vi];
    if (route.owner != veh.owner) fail(who + ": owner mismatch");
    int node = s.aggregator(veh.owner).depot;
    int t = 0;
    double soc = veh.initial_soc_kwh;
    double km = 0.0, consumed = 0.0, charged = 0.0, cost = 0.0;
    std::vector<int> onboard;
    int passengers = 0;

    for (const Action& a : route.actions) {
      if (a.step < t) fail(who + ": action at step " + std::to_string(a.step) + " overlaps");
      t = std::max(t, a.step);
      if (a.node != node) {
        fail(who + ": action at step " + std::to_string(a.step) + " starts at node " +
             std::to_string(a.node) + " but vehicle is at " + std::to_string(node));
      }
      switch (a.kind) {
        case ActionKind::kMove: {
          if (a.edge < 0 || a.edge >= static_cast<int>(s.transport.edges.size())) {
            fail(who + ": unknown edge");
            break;
          }
          const TransportEdge& e = s.transport.edges[a.edge];
          const bool fwd = e.from == a.node && e.to == a.to_node;
          const bool bwd = !e.directed && e.to == a.node && e.from == a.to_node;
          if (!fwd && !bwd) fail(who + ": edge does not join move endpoints");
          if (a.duration != e.travel_steps) fail(who + ": move duration differs from edge");
          km += e.distance_km;
          consumed += e.distance_km * veh.consumption_kwh_per_km;
          soc -= e.distance_km * veh.consumption_kwh_per_km;
          if (soc < -tol) fail(who + ": battery below zero after move at step " + std::to_string(a.step));
          node = a.to_node;
          t += a.duration;
          break;
        }
        case ActionKind::kWait:
          if (a.duration < 0) fail(who + ": negative wait");
          t += a.duration;
          break;
        case ActionKind::kPickup: {
          int ri = -1;
          for (int r : p.requests) {
            if (s.requests[r].id == a.request) ri = r;
          }
          if (ri < 0) {
            fail(who + ": pickup of request outside the problem");
            break;
          }
          const Request& rq = s.requests[ri];
          if (a.node != rq.origin) fail(who + ": pickup away from origin");
          if (a.step < rq.earliest_pickup_step) fail(who + ": pickup before earliest step");
          if (!onboard.empty()) fail(who + ": pickup while carrying a passenger group");
          passengers += rq.passengers;
          if (passengers > veh.seat_capacity) fail(who + ": seats exceeded");
          onboard.push_back(rq.id);
          ++picked[rq.id];
          break;
        }
        case ActionKind::kDropoff: {
          auto it = std::find(onboard.begin(), onboard.end(), a.request);
          if (it == onboard.end()) {
            fail(who + ": dropoff of request not on board");
            break;
          }
          for (int r : p.requests) {
            if (s.requests[r].id != a.request) continue;
            if (a.node != s.requests[r].destination) fail(who + ": dropoff away from destination");
            passengers -= s.requests[r].passengers;
          }
          onboard.erase(it);
          ++dropped[a.request];
          break;
        }
        case ActionKind::kCharge: {
          const int ci = s.charger_index(a.charger);
          if (ci < 0 || !p.may_use(s, vi, ci)) {
            fail(who + ": charger " + std::to_string(a.charger) + " not usable");
            break;
          }
          const Charger& ch = s.chargers[ci];
          if (a.node != ch.transport_node) fail(who + ": charging away from charger");
          if (a.duration != 1) fail(who + ": charge action must last one step");
          if (a.step < 0 || a.step >= horizon) {
            fail(who + ": charging outside the horizon");
            break;
          }
          if (a.kwh < -tol) fail(who + ": negative charge");
          if (a.kwh / h > ch.max_rate_kw * (1 + tol) + tol) fail(who + ": charge rate above maximum");
          soc += a.kwh;
          if (soc > veh.battery_capacity_kwh + tol) fail(who + ": battery above capacity");
          charged += a.kwh;
          cost += s.objective.energy_price_weight * ch.price_at(a.step) * a.kwh;
          const int bus = s.grid.bus_index(ch.grid_bus);
          load.at(bus, a.step) += a.kwh / h;
          t += 1;
          break;
        }
      }
      if (t > horizon) fail(who + ": activity beyond the horizon");
    }
    if (!onboard.empty()) fail(who + ": passengers still on board at the end");
    if (s.objective.return_to_depot && node != s.aggregator(veh.owner).depot) {
      fail(who + ": does not return to depot");
    }
    cost += s.objective.distance_weight * km;
    if (!near(km, route.km)) fail(who + ": km mismatch");
    if (!near(consumed, route.consumed_kwh)) fail(who + ": consumption mismatch");
    if (!near(charged, route.charged_kwh)) fail(who + ": charged energy mismatch");
    if (!near(cost, route.cost)) fail(who + ": cost mismatch");
    objective += cost;
    energy += consumed;
    km_total += km;
    share[veh.owner].first += cost;
    share[veh.owner].second += consumed;
  }

  std::sort(seen_vehicles.begin(), seen_vehicles.end());
  std::sort(expected_vehicles.begin(), expected_vehicles.end());
  if (seen_vehicles != expected_vehicles) fail("route set differs from the problem's vehicles");
  for (int r : p.requests) {
    const int id = s.requests[r].id;
    if (picked[id] != 1 || dropped[id] != 1) {
      fail("request " + std::to_string(id) + " not served exactly once");
    }
  }
  if (!near(objective, sol.objective_cost)) fail("objective mismatch");
  if (!near(energy, sol.total_energy_kwh)) fail("total energy mismatch");
  if (!near(km_total, sol.total_km)) fail("total km mismatch");

  if (sol.charging_load.buses() != load.buses() || sol.charging_load.steps() != load.steps()) {
    fail("charging load has wrong dimensions");
  } else {
    for (int b = 0; b < load.buses(); ++b) {
      for (int t = 0; t < load.steps(); ++t) {
        if (!near(load.at(b, t), sol.charging_load.at(b, t))) {
          fail("charging load mismatch at bus index " + std::to_string(b) + " step " +
               std::to_string(t));
        }
      }
    }
    const GridState gs = solve_lindistflow(s.grid, load);
    for (int t = 0; t < gs.steps(); ++t) {
      for (std::size_t b = 0; b < s.grid.buses.size(); ++b) {
        const double v = gs.v_pu2[t][b];
        if (v < s.grid.buses[b].v_min_pu2 - tol || v > s.grid.buses[b].v_max_pu2 + tol) {
          fail("voltage out of bounds at bus " + std::to_string(s.grid.buses[b].id) +
               " step " + std::to_string(t));
        }
      }
    }
  }

  for (const AggregatorShare& a : sol.per_aggregator) {
    const auto it = share.find(a.aggregator);
    const double c = it == share.end() ? 0.0 : it->second.first;
    const double e = it == share.end() ? 0.0 : it->second.second;
    if (!near(c, a.cost) || !near(e, a.energy_kwh)) {
      fail("attribution mismatch for aggregator " + std::to_string(a.aggregator));
    }
  }
  return rep;
}

}  // namespace evcoop

#endif  // EVCOOP_ROUTING_VALIDATE_HPP
