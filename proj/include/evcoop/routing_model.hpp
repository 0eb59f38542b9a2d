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

#ifndef EVCOOP_ROUTING_MODEL_HPP
#define EVCOOP_ROUTING_MODEL_HPP

// Routing/charging model behind the characteristic function.
//
// Time is discrete. A vehicle plan is an ordered list of stops: serve a
// request (drive to its origin, wait for the earliest pickup step, drive to
// the destination) or visit a charger and dwell there for a number of steps.
// A charge stop may only precede a serve (or the final return to the depot)
// and lasts 1..K steps, K = ceil(battery / (rate * step_hours)). Moves follow
// shortest (distance, then steps) paths and happen as early as possible.
// Given the discrete plan, energy per charging step is continuous and is
// chosen by an LP that enforces state of charge bounds and LinDistFlow
// voltage limits on the EV load.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "evcoop/coalition.hpp"
#include "evcoop/error.hpp"
#include "evcoop/grid.hpp"
#include "evcoop/lp.hpp"
#include "evcoop/scenario.hpp"
#include "evcoop/transport.hpp"

namespace evcoop {

// Which fleets, requests and chargers take part in one solve.
struct RoutingProblem {
  Coalition coalition;
  std::vector<int> vehicles;         // scenario vehicle indices
  std::vector<int> requests;         // scenario request indices
  std::vector<int> usable_chargers;  // scenario charger indices
  // Each vehicle may only use chargers of its own aggregator (no sharing).
  bool own_chargers_only = false;

  bool may_use(const Scenario& s, int vehicle, int charger) const {
    if (std::find(usable_chargers.begin(), usable_chargers.end(), charger) ==
        usable_chargers.end()) {
      return false;
    }
    return !own_chargers_only || s.chargers[charger].owner == s.vehicles[vehicle].owner;
  }
};

// Vehicles and chargers of the members pooled; by default every request.
inline RoutingProblem make_coalition_problem(
    const Scenario& s, Coalition coalition,
    const std::optional<std::vector<int>>& request_ids = std::nullopt) {
  if (coalition.empty() || !coalition.fits(s.players())) {
    throw Error(Errc::kInvalidArgument,
                "coalition " + coalition.to_string() + " is not a nonempty subset of N");
  }
  RoutingProblem p;
  p.coalition = coalition;
  for (std::size_t v = 0; v < s.vehicles.size(); ++v) {
    if (coalition.contains(s.vehicles[v].owner)) p.vehicles.push_back(static_cast<int>(v));
  }
  for (std::size_t c = 0; c < s.chargers.size(); ++c) {
    if (coalition.contains(s.chargers[c].owner)) p.usable_chargers.push_back(static_cast<int>(c));
  }
  if (request_ids) {
    for (int id : *request_ids) {
      int found = -1;
      for (std::size_t r = 0; r < s.requests.size(); ++r) {
        if (s.requests[r].id == id) found = static_cast<int>(r);
      }
      if (found < 0) {
        throw Error(Errc::kDanglingReference, "request " + std::to_string(id));
      }
      p.requests.push_back(found);
    }
    std::sort(p.requests.begin(), p.requests.end());
    p.requests.erase(std::unique(p.requests.begin(), p.requests.end()), p.requests.end());
  } else {
    for (std::size_t r = 0; r < s.requests.size(); ++r) p.requests.push_back(static_cast<int>(r));
  }
  return p;
}

enum class ActionKind { kMove, kWait, kPickup, kDropoff, kCharge };

struct Action {
  ActionKind kind = ActionKind::kWait;
  int step = 0;      // first step the action occupies
  int duration = 0;  // steps (move: edge travel steps, wait: steps, charge: 1)
  int node = -1;     // node id where the action starts
  int to_node = -1;  // move: destination node id
  int edge = -1;     // move: index into transport.edges
  int request = -1;  // pickup/dropoff: request id
  int charger = -1;  // charge: charger id
  double kwh = 0.0;  // charge: energy delivered in this step
};

struct VehicleRoute {
  int vehicle_id = 0;
  int owner = 0;
  std::vector<Action> actions;
  double km = 0.0;
  double consumed_kwh = 0.0;
  double charged_kwh = 0.0;
  double cost = 0.0;  // distance and charging terms of the objective
};

struct AggregatorShare {
  int aggregator = 0;
  double cost = 0.0;
  double energy_kwh = 0.0;
};

struct RoutingSolution {
  std::vector<VehicleRoute> routes;
  double objective_cost = 0.0;
  double total_energy_kwh = 0.0;  // driving consumption
  double total_km = 0.0;
  LoadMatrix charging_load;       // kW, bus index x step
  std::vector<AggregatorShare> per_aggregator;
};

namespace routing {

inline constexpr double kEnergyTol = 1e-9;

struct VehicleInfo {
  int scn = 0;
  int owner = 0;
  int depot = 0;  // node index
  double capacity = 0, soc0 = 0, cons = 0;
  int seats = 0;
  std::vector<int> chargers;  // instance charger indices usable by it
  bool twin_of_prev = false;  // interchangeable with the previous vehicle
};

struct ChargerInfo {
  int scn = 0;
  int node = 0;  // node index
  int bus = 0;   // bus index
  double kwh_per_step = 0;
  std::vector<double> price;  // per step
  double min_price = 0;
};

struct RequestInfo {
  int scn = 0;
  int origin = 0, dest = 0;  // node indices
  int earliest = 0;
  int passengers = 1;
  double leg_km = 0;
  int leg_steps = 0;
};

// Everything a solve needs, precomputed once.
struct Instance {
  const Scenario* scenario = nullptr;
  RoutingProblem problem;
  ShortestPaths sp;
  int horizon = 0;
  double step_h = 0;
  ObjectiveWeights weights;
  std::vector<VehicleInfo> veh;
  std::vector<ChargerInfo> chg;
  std::vector<RequestInfo> req;

  GridTopology topo;
  std::vector<std::vector<double>> sens;    // [bus j][bus b], pu^2 per kW
  std::vector<std::vector<double>> base_v;  // [step][bus]
  std::vector<std::vector<double>> headroom_kw;  // [bus][step], base case
  int base_infeasible_step = -1;

  double min_price = lp::kInf;  // over chargers usable by any vehicle

  int max_dwell(int v, int c) const {
    const double k = veh[v].capacity / chg[c].kwh_per_step;
    return std::max(1, static_cast<int>(std::ceil(k - 1e-12)));
  }
  // Upper bound on energy a charge step can deliver under base grid load.
  double step_energy_cap(int c, int step) const {
    const double kw = std::min(chg[c].kwh_per_step / step_h,
                               headroom_kw[chg[c].bus][step]);
    return kw * step_h;
  }
};

inline Instance build_instance(const Scenario& s, const RoutingProblem& p) {
  Instance in;
  in.scenario = &s;
  in.problem = p;
  in.sp = shortest_paths(s.transport);
  in.horizon = s.horizon_steps;
  in.step_h = s.step_hours();
  in.weights = s.objective;

  std::vector<int> chg_slot(s.chargers.size(), -1);
  for (int c : p.usable_chargers) {
    ChargerInfo ci;
    ci.scn = c;
    const Charger& ch = s.chargers[c];
    ci.node = s.transport.node_index(ch.transport_node);
    ci.bus = s.grid.bus_index(ch.grid_bus);
    ci.kwh_per_step = ch.max_rate_kw * in.step_h;
    ci.price.resize(in.horizon);
    for (int t = 0; t < in.horizon; ++t) ci.price[t] = ch.price_at(t);
    ci.min_price = *std::min_element(ci.price.begin(), ci.price.end());
    chg_slot[c] = static_cast<int>(in.chg.size());
    in.chg.push_back(std::move(ci));
  }
  for (int v : p.vehicles) {
    const Vehicle& vh = s.vehicles[v];
    VehicleInfo vi;
    vi.scn = v;
    vi.owner = vh.owner;
    vi.depot = s.transport.node_index(s.aggregator(vh.owner).depot);
    vi.capacity = vh.battery_capacity_kwh;
    vi.soc0 = vh.initial_soc_kwh;
    vi.cons = vh.consumption_kwh_per_km;
    vi.seats = vh.seat_capacity;
    for (int c : p.usable_chargers) {
      if (p.may_use(s, v, c)) {
        vi.chargers.push_back(chg_slot[c]);
        in.min_price = std::min(in.min_price, in.chg[chg_slot[c]].min_price);
      }
    }
    if (!in.veh.empty()) {
      const VehicleInfo& prev = in.veh.back();
      vi.twin_of_prev = prev.owner == vi.owner && prev.depot == vi.depot &&
                        prev.capacity == vi.capacity && prev.soc0 == vi.soc0 &&
                        prev.cons == vi.cons && prev.seats == vi.seats &&
                        prev.chargers == vi.chargers;
    }
    in.veh.push_back(std::move(vi));
  }
  for (int r : p.requests) {
    const Request& rq = s.requests[r];
    RequestInfo ri;
    ri.scn = r;
    ri.origin = s.transport.node_index(rq.origin);
    ri.dest = s.transport.node_index(rq.destination);
    ri.earliest = rq.earliest_pickup_step;
    ri.passengers = rq.passengers;
    ri.leg_km = in.sp.distance(ri.origin, ri.dest);
    ri.leg_steps = in.sp.travel_steps(ri.origin, ri.dest);
    in.req.push_back(ri);
  }

  // Grid: base-case voltages, sensitivities and per-(bus, step) headroom.
  in.topo = grid_topology(s.grid);
  in.sens = voltage_sensitivity(s.grid, in.topo);
  const int nb = static_cast<int>(s.grid.buses.size());
  const GridState base = solve_lindistflow(s.grid, LoadMatrix(nb, in.horizon));
  in.base_v = base.v_pu2;
  in.headroom_kw.assign(nb, std::vector<double>(in.horizon, kNoGridLimit));
  for (int t = 0; t < in.horizon; ++t) {
    if (!base.feasible[t] && in.base_infeasible_step < 0) in.base_infeasible_step = t;
    for (int b = 0; b < nb; ++b) {
      double h = kNoGridLimit;
      for (int j = 0; j < nb; ++j) {
        if (in.sens[j][b] <= 0.0) continue;
        const double slack = std::max(0.0, in.base_v[t][j] - s.grid.buses[j].v_min_pu2);
        h = std::min(h, slack / in.sens[j][b]);
      }
      in.headroom_kw[b][t] = h;
    }
  }
  return in;
}

// One stop of a vehicle plan. request >= 0: serve; otherwise charge.
struct Stop {
  std::int16_t request = -1;
  std::int16_t charger = -1;
  std::int16_t dwell = 0;

  bool is_charge() const { return request < 0; }
  friend bool operator==(const Stop&, const Stop&) = default;
};

using Plan = std::vector<Stop>;

// Timeline of one vehicle plan with events in order.
struct Event {
  enum Kind { kTravel, kWait, kPickup, kDropoff, kCharge } kind;
  int from = -1, to = -1;  // node indices (travel); node for others
  int start = 0, end = 0;  // steps
  double km = 0;
  double cons_after = 0;   // cumulative consumption after this event
  int request = -1;        // instance request index
  int charger = -1;        // instance charger index
};

struct Timeline {
  bool time_feasible = true;
  std::vector<Event> events;
  double km = 0;
  double consumption = 0;
  int end_step = 0;
};

inline Timeline build_timeline(const Instance& in, int v, const Plan& plan) {
  Timeline tl;
  const VehicleInfo& vi = in.veh[v];
  int pos = vi.depot;
  int t = 0;
  auto travel = [&](int to) {
    if (to == pos) return;
    const double km = in.sp.distance(pos, to);
    const int steps = in.sp.travel_steps(pos, to);
    tl.km += km;
    tl.consumption += km * vi.cons;
    tl.events.push_back({Event::kTravel, pos, to, t, t + steps, km, tl.consumption});
    t += steps;
    pos = to;
  };
  auto wait_until = [&](int until) {
    if (until <= t) return;
    tl.events.push_back({Event::kWait, pos, pos, t, until, 0, tl.consumption});
    t = until;
  };
  for (const Stop& st : plan) {
    if (st.is_charge()) {
      const ChargerInfo& c = in.chg[st.charger];
      travel(c.node);
      Event e{Event::kCharge, pos, pos, t, t + st.dwell, 0, tl.consumption};
      e.charger = st.charger;
      tl.events.push_back(e);
      t += st.dwell;
    } else {
      const RequestInfo& r = in.req[st.request];
      travel(r.origin);
      wait_until(r.earliest);
      Event pick{Event::kPickup, pos, pos, t, t, 0, tl.consumption};
      pick.request = st.request;
      tl.events.push_back(pick);
      travel(r.dest);
      Event drop{Event::kDropoff, pos, pos, t, t, 0, tl.consumption};
      drop.request = st.request;
      tl.events.push_back(drop);
    }
    if (t > in.horizon) tl.time_feasible = false;
  }
  if (in.weights.return_to_depot) travel(vi.depot);
  if (t > in.horizon) tl.time_feasible = false;
  tl.end_step = t;
  return tl;
}

// Exact cost of a full set of vehicle plans: distance term plus the optimal
// charging LP. Empty when the plans cannot be made energy/grid feasible.
struct Evaluation {
  double objective = 0;
  double km = 0;
  double charging_cost = 0;  // weighted, as it enters the objective
  std::vector<Timeline> timelines;
  // Energy per charge step: energy[v][event index] lists kWh per dwell step.
  std::vector<std::vector<std::vector<double>>> energy;
};

inline std::optional<Evaluation> evaluate_plans(const Instance& in,
                                                const std::vector<Plan>& plans) {
  Evaluation ev;
  const int nv = static_cast<int>(in.veh.size());
  ev.timelines.reserve(nv);
  for (int v = 0; v < nv; ++v) {
    ev.timelines.push_back(build_timeline(in, v, plans[v]));
    if (!ev.timelines.back().time_feasible) return std::nullopt;
    ev.km += ev.timelines.back().km;
  }
  if (in.base_infeasible_step >= 0) return std::nullopt;

  lp::LinearProgram prog;
  struct VarRef { int step; int bus; };
  std::vector<VarRef> vars;
  ev.energy.assign(nv, {});
  std::vector<std::vector<std::vector<int>>> var_of(nv);
  bool any_var = false;
  for (int v = 0; v < nv; ++v) {
    const VehicleInfo& vi = in.veh[v];
    const Timeline& tl = ev.timelines[v];
    ev.energy[v].assign(tl.events.size(), {});
    var_of[v].assign(tl.events.size(), {});
    lp::LinearProgram::Terms charged;  // all charge variables so far
    double max_charged = 0.0;
    for (std::size_t k = 0; k < tl.events.size(); ++k) {
      const Event& e = tl.events[k];
      if (e.kind == Event::kTravel) {
        const double need = e.cons_after - vi.soc0;
        if (need > kEnergyTol) {
          if (need > max_charged + kEnergyTol) return std::nullopt;
          prog.add_constraint(charged, lp::Sense::kGreaterEqual, need);
        }
      } else if (e.kind == Event::kCharge) {
        const ChargerInfo& c = in.chg[e.charger];
        for (int t = e.start; t < e.end; ++t) {
          const double ub = in.step_energy_cap(e.charger, t);
          const double price = in.weights.energy_price_weight * c.price[t];
          const int j = prog.add_variable(price, ub);
          vars.push_back({t, c.bus});
          var_of[v][k].push_back(j);
          charged.emplace_back(j, 1.0);
          max_charged += ub;
          any_var = true;
          // State of charge may not exceed capacity after this step.
          prog.add_constraint(charged, lp::Sense::kLessEqual,
                              vi.capacity - vi.soc0 + e.cons_after);
        }
      }
    }
    if (tl.consumption - vi.soc0 > max_charged + kEnergyTol) return std::nullopt;
  }

  // Coupled voltage limits for steps where several charge variables meet.
  if (any_var) {
    const auto& buses = in.scenario->grid.buses;
    const int nb = static_cast<int>(buses.size());
    std::vector<std::vector<int>> by_step(in.horizon);
    for (std::size_t j = 0; j < vars.size(); ++j) by_step[vars[j].step].push_back(static_cast<int>(j));
    for (int t = 0; t < in.horizon; ++t) {
      if (by_step[t].size() < 2) continue;
      for (int bj = 0; bj < nb; ++bj) {
        lp::LinearProgram::Terms terms;
        for (int j : by_step[t]) {
          const double s = in.sens[bj][vars[j].bus];
          if (s > 0.0) terms.emplace_back(j, s / in.step_h);
        }
        if (terms.size() < 2) continue;
        prog.add_constraint(std::move(terms), lp::Sense::kLessEqual,
                            std::max(0.0, in.base_v[t][bj] - buses[bj].v_min_pu2));
      }
    }
    const lp::Result r = prog.minimize();
    if (!r.optimal()) return std::nullopt;
    ev.charging_cost = r.objective;
    for (int v = 0; v < nv; ++v) {
      for (std::size_t k = 0; k < var_of[v].size(); ++k) {
        for (int j : var_of[v][k]) ev.energy[v][k].push_back(r.x[j]);
      }
    }
  }
  ev.objective = in.weights.distance_weight * ev.km + ev.charging_cost;
  return ev;
}

// Expands an evaluated plan set into explicit per-step actions.
inline RoutingSolution build_solution(const Instance& in, const Evaluation& ev) {
  const Scenario& s = *in.scenario;
  RoutingSolution sol;
  sol.charging_load = LoadMatrix(static_cast<int>(s.grid.buses.size()), in.horizon);
  for (std::size_t v = 0; v < in.veh.size(); ++v) {
    const VehicleInfo& vi = in.veh[v];
    const Timeline& tl = ev.timelines[v];
    VehicleRoute route;
    route.vehicle_id = s.vehicles[vi.scn].id;
    route.owner = vi.owner;
    route.km = tl.km;
    route.consumed_kwh = tl.consumption;
    double charge_cost = 0.0;
    auto push_wait = [&](int node, int step, int steps) {
      if (steps <= 0) return;
      if (!route.actions.empty()) {
        Action& last = route.actions.back();
        if (last.kind == ActionKind::kWait && last.step + last.duration == step) {
          last.duration += steps;
          return;
        }
      }
      Action a;
      a.kind = ActionKind::kWait;
      a.step = step;
      a.duration = steps;
      a.node = s.transport.nodes[node].id;
      route.actions.push_back(a);
    };
    for (std::size_t k = 0; k < tl.events.size(); ++k) {
      const Event& e = tl.events[k];
      switch (e.kind) {
        case Event::kTravel: {
          int t = e.start;
          int at = e.from;
          for (int edge : in.sp.path_edges(s.transport, e.from, e.to)) {
            const TransportEdge& te = s.transport.edges[edge];
            const int a_idx = s.transport.node_index(te.from);
            const int next = (a_idx == at) ? s.transport.node_index(te.to) : a_idx;
            Action a;
            a.kind = ActionKind::kMove;
            a.step = t;
            a.duration = te.travel_steps;
            a.node = s.transport.nodes[at].id;
            a.to_node = s.transport.nodes[next].id;
            a.edge = edge;
            route.actions.push_back(a);
            t += te.travel_steps;
            at = next;
          }
          break;
        }
        case Event::kWait:
          push_wait(e.from, e.start, e.end - e.start);
          break;
        case Event::kPickup:
        case Event::kDropoff: {
          Action a;
          a.kind = e.kind == Event::kPickup ? ActionKind::kPickup : ActionKind::kDropoff;
          a.step = e.start;
          a.node = s.transport.nodes[e.from].id;
          a.request = s.requests[in.req[e.request].scn].id;
          route.actions.push_back(a);
          break;
        }
        case Event::kCharge: {
          const ChargerInfo& c = in.chg[e.charger];
          const auto& amounts = ev.energy[v][k];
          for (int t = e.start; t < e.end; ++t) {
            const double kwh = amounts.empty() ? 0.0 : amounts[t - e.start];
            if (kwh <= 1e-12) {
              push_wait(e.from, t, 1);
              continue;
            }
            Action a;
            a.kind = ActionKind::kCharge;
            a.step = t;
            a.duration = 1;
            a.node = s.transport.nodes[e.from].id;
            a.charger = s.chargers[c.scn].id;
            a.kwh = kwh;
            route.actions.push_back(a);
            route.charged_kwh += kwh;
            charge_cost += in.weights.energy_price_weight * c.price[t] * kwh;
            sol.charging_load.at(c.bus, t) += kwh / in.step_h;
          }
          break;
        }
      }
    }
    route.cost = in.weights.distance_weight * route.km + charge_cost;
    sol.total_km += route.km;
    sol.total_energy_kwh += route.consumed_kwh;
    sol.objective_cost += route.cost;
    sol.routes.push_back(std::move(route));
  }
  for (int a : in.problem.coalition.members()) {
    AggregatorShare share{a, 0.0, 0.0};
    for (const auto& r : sol.routes) {
      if (r.owner == a) {
        share.cost += r.cost;
        share.energy_kwh += r.consumed_kwh;
      }
    }
    sol.per_aggregator.push_back(share);
  }
  return sol;
}

}  // namespace routing
}  // namespace evcoop

#endif  // EVCOOP_ROUTING_MODEL_HPP
