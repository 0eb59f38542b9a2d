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

#ifndef EVCOOP_SCENARIO_IO_HPP
#define EVCOOP_SCENARIO_IO_HPP

// Scenario file reader/writer. Schema (one record per line):
//
//   [horizon]          steps=<int> step_minutes=<int>
//   [objective]        energy_price_weight=<$> distance_weight=<$/km>
//                      return_to_depot=<0|1>
//   [aggregators]      id=<1..n> depot=<node> vehicles=<ids> chargers=<ids>
//   [vehicles]         id owner capacity_kwh soc_kwh kwh_per_km [seats]
//   [chargers]         id owner node bus rate_kw price=<$/kWh or list>
//   [transport.nodes]  id kind=<customer|depot|charger> [lat lon zone]
//   [transport.edges]  from to km (steps=<int> | minutes=<num>) [directed]
//   [grid]             slack=<bus> [base_kva ev_pf]
//   [grid.buses]       id [p_kw q_kvar vmin2 vmax2] (scalar or list)
//   [grid.lines]       from to r x
//   [requests]         id origin destination earliest [passengers]
//
// Edge times given in minutes are rounded up to whole steps at load time.

#include <cmath>
#include <string>
#include <string_view>

#include "evcoop/record_format.hpp"
#include "evcoop/scenario.hpp"

namespace evcoop {

namespace detail {

inline NodeKind parse_node_kind(const text::Record& r) {
  const std::string& k = r.at("kind");
  if (k == "customer") return NodeKind::kCustomer;
  if (k == "depot") return NodeKind::kDepot;
  if (k == "charger") return NodeKind::kChargerSite;
  throw Error(Errc::kParse, "line " + std::to_string(r.line) +
                                ": unknown node kind '" + k + "'");
}

inline std::string_view node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kCustomer: return "customer";
    case NodeKind::kDepot: return "depot";
    case NodeKind::kChargerSite: return "charger";
  }
  return "customer";
}

inline Zone parse_zone(const text::Record& r) {
  const std::string& z = r.at("zone");
  if (z == "commercial") return Zone::kCommercial;
  if (z == "industrial") return Zone::kIndustrial;
  if (z == "residential") return Zone::kResidential;
  throw Error(Errc::kParse, "line " + std::to_string(r.line) +
                                ": unknown zone '" + z + "'");
}

inline std::string_view zone_name(Zone z) {
  switch (z) {
    case Zone::kCommercial: return "commercial";
    case Zone::kIndustrial: return "industrial";
    case Zone::kResidential: return "residential";
  }
  return "residential";
}

inline const std::vector<text::Record>& records(const text::Document& doc,
                                                std::string_view name) {
  static const std::vector<text::Record> kEmpty;
  const auto* s = doc.find(name);
  return s ? s->records : kEmpty;
}

inline int to_int(long long v) { return static_cast<int>(v); }

inline std::string doubles(const std::vector<double>& xs) {
  return text::join(xs, [](double v) { return text::format_double(v); });
}

inline std::string ints(const std::vector<int>& xs) {
  return text::join(xs, [](int v) { return std::to_string(v); });
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view content) {
  using namespace text;
  using detail::records;
  using detail::to_int;
  const Document doc = parse_document(content);
  static const std::set<std::string, std::less<>> kKnown = {
      "horizon", "objective", "aggregators", "vehicles", "chargers",
      "transport.nodes", "transport.edges", "grid", "grid.buses", "grid.lines",
      "requests"};
  for (const auto& sec : doc.sections) {
    if (!kKnown.count(sec.name)) {
      throw Error(Errc::kParse, "line " + std::to_string(sec.line) +
                                    ": unknown section [" + sec.name + "]");
    }
  }

  Scenario s;
  if (const auto& h = records(doc, "horizon"); !h.empty()) {
    s.horizon_steps = to_int(parse_int(h.front(), "steps"));
    s.step_minutes = to_int(parse_int_or(h.front(), "step_minutes", 15));
  }
  if (const auto& o = records(doc, "objective"); !o.empty()) {
    s.objective.energy_price_weight =
        parse_double_or(o.front(), "energy_price_weight", 1.0);
    s.objective.distance_weight =
        parse_double_or(o.front(), "distance_weight", 0.05);
    s.objective.return_to_depot =
        parse_int_or(o.front(), "return_to_depot", 0) != 0;
  }
  for (const auto& r : records(doc, "aggregators")) {
    Aggregator a;
    a.id = to_int(parse_int(r, "id"));
    a.depot = to_int(parse_int(r, "depot"));
    if (r.has("vehicles")) a.vehicle_ids = parse_int_list(r, "vehicles");
    if (r.has("chargers")) a.owned_charger_ids = parse_int_list(r, "chargers");
    s.aggregators.push_back(std::move(a));
  }
  for (const auto& r : records(doc, "vehicles")) {
    Vehicle v;
    v.id = to_int(parse_int(r, "id"));
    v.owner = to_int(parse_int(r, "owner"));
    v.battery_capacity_kwh = parse_double(r, "capacity_kwh");
    v.initial_soc_kwh = parse_double(r, "soc_kwh");
    v.consumption_kwh_per_km = parse_double(r, "kwh_per_km");
    v.seat_capacity = to_int(parse_int_or(r, "seats", 4));
    s.vehicles.push_back(v);
  }
  for (const auto& r : records(doc, "chargers")) {
    Charger c;
    c.id = to_int(parse_int(r, "id"));
    c.owner = to_int(parse_int(r, "owner"));
    c.transport_node = to_int(parse_int(r, "node"));
    c.grid_bus = to_int(parse_int(r, "bus"));
    c.max_rate_kw = parse_double(r, "rate_kw");
    c.price_per_kwh = parse_double_list(r, "price");
    s.chargers.push_back(std::move(c));
  }
  for (const auto& r : records(doc, "transport.nodes")) {
    TransportNode n;
    n.id = to_int(parse_int(r, "id"));
    n.kind = r.has("kind") ? detail::parse_node_kind(r) : NodeKind::kCustomer;
    if (r.has("lat")) n.lat = parse_double(r, "lat");
    if (r.has("lon")) n.lon = parse_double(r, "lon");
    if (r.has("zone")) n.zone = detail::parse_zone(r);
    s.transport.nodes.push_back(n);
  }
  for (const auto& r : records(doc, "transport.edges")) {
    TransportEdge e;
    e.from = to_int(parse_int(r, "from"));
    e.to = to_int(parse_int(r, "to"));
    e.distance_km = parse_double(r, "km");
    if (r.has("steps")) {
      e.travel_steps = to_int(parse_int(r, "steps"));
    } else if (r.has("minutes")) {
      const double minutes = parse_double(r, "minutes");
      e.travel_steps = std::max(1, static_cast<int>(std::ceil(
                                       minutes / s.step_minutes - 1e-12)));
    } else {
      throw Error(Errc::kParse, "line " + std::to_string(r.line) +
                                    ": edge needs steps= or minutes=");
    }
    e.directed = parse_int_or(r, "directed", 0) != 0;
    s.transport.edges.push_back(e);
  }
  if (const auto& g = records(doc, "grid"); !g.empty()) {
    s.grid.slack_bus = to_int(parse_int(g.front(), "slack"));
    s.grid.base_kva = parse_double_or(g.front(), "base_kva", 1000.0);
    s.grid.ev_power_factor = parse_double_or(g.front(), "ev_pf", 1.0);
  }
  for (const auto& r : records(doc, "grid.buses")) {
    Bus b;
    b.id = to_int(parse_int(r, "id"));
    if (r.has("p_kw")) b.base_load_kw = parse_double_list(r, "p_kw");
    if (r.has("q_kvar")) b.base_load_kvar = parse_double_list(r, "q_kvar");
    b.v_min_pu2 = parse_double_or(r, "vmin2", kDefaultVMinPu2);
    b.v_max_pu2 = parse_double_or(r, "vmax2", kDefaultVMaxPu2);
    s.grid.buses.push_back(std::move(b));
  }
  for (const auto& r : records(doc, "grid.lines")) {
    s.grid.lines.push_back({to_int(parse_int(r, "from")),
                            to_int(parse_int(r, "to")), parse_double(r, "r"),
                            parse_double(r, "x")});
  }
  for (const auto& r : records(doc, "requests")) {
    Request q;
    q.id = to_int(parse_int(r, "id"));
    q.origin = to_int(parse_int(r, "origin"));
    q.destination = to_int(parse_int(r, "destination"));
    q.earliest_pickup_step = to_int(parse_int_or(r, "earliest", 0));
    q.passengers = to_int(parse_int_or(r, "passengers", 1));
    s.requests.push_back(q);
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  return parse_scenario(text::read_file(path));
}

inline std::string serialize_scenario(const Scenario& s) {
  using text::format_double;
  using detail::doubles;
  using detail::ints;
  std::string out;
  auto line = [&](const std::string& l) { out += l + "\n"; };
  line("[horizon]");
  line("steps=" + std::to_string(s.horizon_steps) +
       " step_minutes=" + std::to_string(s.step_minutes));
  line("");
  line("[objective]");
  line("energy_price_weight=" + format_double(s.objective.energy_price_weight) +
       " distance_weight=" + format_double(s.objective.distance_weight) +
       " return_to_depot=" + (s.objective.return_to_depot ? "1" : "0"));
  line("");
  line("[aggregators]");
  for (const auto& a : s.aggregators) {
    std::string l = "id=" + std::to_string(a.id) +
                    " depot=" + std::to_string(a.depot);
    if (!a.vehicle_ids.empty()) l += " vehicles=" + ints(a.vehicle_ids);
    if (!a.owned_charger_ids.empty()) l += " chargers=" + ints(a.owned_charger_ids);
    line(l);
  }
  line("");
  line("[vehicles]");
  for (const auto& v : s.vehicles) {
    line("id=" + std::to_string(v.id) + " owner=" + std::to_string(v.owner) +
         " capacity_kwh=" + format_double(v.battery_capacity_kwh) +
         " soc_kwh=" + format_double(v.initial_soc_kwh) +
         " kwh_per_km=" + format_double(v.consumption_kwh_per_km) +
         " seats=" + std::to_string(v.seat_capacity));
  }
  line("");
  line("[chargers]");
  for (const auto& c : s.chargers) {
    line("id=" + std::to_string(c.id) + " owner=" + std::to_string(c.owner) +
         " node=" + std::to_string(c.transport_node) +
         " bus=" + std::to_string(c.grid_bus) +
         " rate_kw=" + format_double(c.max_rate_kw) +
         " price=" + doubles(c.price_per_kwh));
  }
  line("");
  line("[transport.nodes]");
  for (const auto& n : s.transport.nodes) {
    std::string l = "id=" + std::to_string(n.id) + " kind=" +
                    std::string(detail::node_kind_name(n.kind));
    if (n.lat) l += " lat=" + format_double(*n.lat);
    if (n.lon) l += " lon=" + format_double(*n.lon);
    if (n.zone) l += " zone=" + std::string(detail::zone_name(*n.zone));
    line(l);
  }
  line("");
  line("[transport.edges]");
  for (const auto& e : s.transport.edges) {
    std::string l = "from=" + std::to_string(e.from) +
                    " to=" + std::to_string(e.to) +
                    " km=" + format_double(e.distance_km) +
                    " steps=" + std::to_string(e.travel_steps);
    if (e.directed) l += " directed=1";
    line(l);
  }
  line("");
  line("[grid]");
  line("slack=" + std::to_string(s.grid.slack_bus) +
       " base_kva=" + format_double(s.grid.base_kva) +
       " ev_pf=" + format_double(s.grid.ev_power_factor));
  line("");
  line("[grid.buses]");
  for (const auto& b : s.grid.buses) {
    line("id=" + std::to_string(b.id) + " p_kw=" + doubles(b.base_load_kw) +
         " q_kvar=" + doubles(b.base_load_kvar) +
         " vmin2=" + format_double(b.v_min_pu2) +
         " vmax2=" + format_double(b.v_max_pu2));
  }
  line("");
  line("[grid.lines]");
  for (const auto& l : s.grid.lines) {
    line("from=" + std::to_string(l.from_bus) + " to=" + std::to_string(l.to_bus) +
         " r=" + format_double(l.r_pu) + " x=" + format_double(l.x_pu));
  }
  line("");
  line("[requests]");
  for (const auto& r : s.requests) {
    line("id=" + std::to_string(r.id) + " origin=" + std::to_string(r.origin) +
         " destination=" + std::to_string(r.destination) +
         " earliest=" + std::to_string(r.earliest_pickup_step) +
         " passengers=" + std::to_string(r.passengers));
  }
  return out;
}

}  // namespace evcoop

#endif  // EVCOOP_SCENARIO_IO_HPP
