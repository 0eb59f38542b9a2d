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

#ifndef EVCOOP_HARNESS_HPP
#define EVCOOP_HARNESS_HPP

// Command implementations behind the evcoop binary. Every command writes
// only deterministic content: no timestamps, timings or paths.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "evcoop/aumann.hpp"
#include "evcoop/cfn_io.hpp"
#include "evcoop/characteristic.hpp"
#include "evcoop/game.hpp"
#include "evcoop/grid.hpp"
#include "evcoop/ingest.hpp"
#include "evcoop/record_format.hpp"
#include "evcoop/routing_solver.hpp"
#include "evcoop/scenario_io.hpp"
#include "evcoop/sweep.hpp"

namespace evcoop {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInfeasible = 2,
  kExitEmptyCore = 3,
  kExitBudgetExhausted = 4,
};

struct RunConfig {
  std::string input;                     // scenario, spec, cfn or csv path
  std::optional<std::filesystem::path> out_dir;
  SolveOptions solve;
  std::optional<std::string> cfn_override;  // game: replace routing values
  BenchMode mode = BenchMode::kAware;
  std::optional<long long> samples;      // bench aware: force Monte Carlo
  std::uint64_t seed = 1;
};

namespace detail {

inline std::string fixed3(double v) { return text::format_fixed(v, 3); }
inline std::string full(double v) { return text::format_double(v); }

inline std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::kUnreadableFile, "cannot write " + p.string());
  f << content;
}

inline std::filesystem::path prepare_out(const RunConfig& cfg) {
  const std::filesystem::path dir = cfg.out_dir.value_or("out");
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string action_name(ActionKind k) {
  switch (k) {
    case ActionKind::kMove: return "move";
    case ActionKind::kWait: return "wait";
    case ActionKind::kPickup: return "pickup";
    case ActionKind::kDropoff: return "dropoff";
    case ActionKind::kCharge: return "charge";
  }
  return "?";
}

inline std::string routes_csv(const RoutingSolution& sol) {
  std::string out = "vehicle,owner,step,duration,action,node,to_node,request,charger,kwh\n";
  for (const auto& r : sol.routes) {
    for (const auto& a : r.actions) {
      auto opt = [](int v) { return v < 0 ? std::string() : std::to_string(v); };
      out += std::to_string(r.vehicle_id) + "," + std::to_string(r.owner) + "," +
             std::to_string(a.step) + "," + std::to_string(a.duration) + "," +
             action_name(a.kind) + "," + opt(a.node) + "," + opt(a.to_node) + "," +
             opt(a.request) + "," + opt(a.charger) + "," +
             (a.kind == ActionKind::kCharge ? full(a.kwh) : std::string()) + "\n";
    }
  }
  return out;
}

inline std::string grid_state_csv(const Scenario& s, const RoutingSolution& sol) {
  const GridState gs = solve_lindistflow(s.grid, sol.charging_load);
  std::string out = "step,bus,ev_load_kw,v_pu2,step_feasible\n";
  for (int t = 0; t < gs.steps(); ++t) {
    for (std::size_t b = 0; b < s.grid.buses.size(); ++b) {
      out += std::to_string(t) + "," + std::to_string(s.grid.buses[b].id) + "," +
             full(sol.charging_load.at(static_cast<int>(b), t)) + "," + full(gs.v_pu2[t][b]) +
             "," + (gs.feasible[t] ? "1" : "0") + "\n";
    }
  }
  return out;
}

// Members' subgame Shapley shares for one coalition row (singleton: its cost).
inline std::optional<Allocation> row_shares(const CharacteristicFunction& c, Coalition s) {
  const CharacteristicFunction sub = c.subgame(s);
  for (Coalition t : coalition_iter(sub.players())) {
    if (!sub.has(t) || !std::isfinite(sub.cost(t))) return std::nullopt;
  }
  return shapley(sub);
}

struct CoreReport {
  bool feasible = false;
  std::optional<CorePolytope> polytope;  // n <= 4 and feasible
  std::vector<double> player_min, player_max;
  CoreCheck shapley_check;
};

inline CoreReport core_report(const CharacteristicFunction& c, const Allocation& phi) {
  CoreReport rep;
  rep.feasible = core_feasible(c).feasible;
  rep.shapley_check = in_core(c, phi);
  if (!rep.feasible) return rep;
  std::tie(rep.player_min, rep.player_max) = core_player_range(c);
  if (c.players() <= 4) rep.polytope = core_vertices(c);
  return rep;
}

inline std::string core_summary(const CharacteristicFunction& c, const Allocation& phi,
                                const CoreReport& rep) {
  const int n = c.players();
  std::string out = "[core]\n";
  out += std::string("status=") + (rep.feasible ? "nonempty" : "empty") + "\n";
  out += "grand_cost=" + full(c.cost(Coalition::grand(n))) + "\n";
  out += "shapley=" + text::join(phi.x, [](double v) { return full(v); }) + "\n";
  out += std::string("shapley_in_core=") + (rep.shapley_check.in_core ? "1" : "0") + "\n";
  for (const auto& v : rep.shapley_check.violations) {
    out += "violation coalition=" + csv_quote(v.coalition.to_string()) +
           (v.efficiency ? " kind=efficiency" : " kind=coalition") + " excess=" + full(v.excess) + "\n";
  }
  if (rep.feasible) {
    out += "\n[players]\n";
    for (int i = 0; i < n; ++i) {
      out += "player=" + std::to_string(i + 1) + " core_min=" + full(rep.player_min[i]) +
             " core_max=" + full(rep.player_max[i]) + "\n";
    }
  }
  return out;
}

inline std::string core_vertices_csv(const CharacteristicFunction& c, const CorePolytope& p) {
  const int n = c.players();
  std::string out = "vertex";
  for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  out += ",binding\n";
  for (std::size_t k = 0; k < p.vertices.size(); ++k) {
    out += std::to_string(k + 1);
    for (double v : p.vertices[k].x) out += "," + full(v);
    std::string binding;
    for (Coalition s : p.binding[k]) binding += (binding.empty() ? "" : " ") + s.to_string();
    out += "," + csv_quote(binding) + "\n";
  }
  return out;
}

inline std::string simplex_csv(const CharacteristicFunction& c, const CorePolytope& p,
                               const Allocation& phi) {
  const double grand = c.cost(Coalition::grand(3));
  std::string out = "point,b1,b2,b3,px,py\n";
  auto row = [&](const std::string& label, const Allocation& x) {
    const SimplexPoint sp = simplex_projection(x, grand);
    out += label + "," + full(sp.b1) + "," + full(sp.b2) + "," + full(sp.b3) + "," +
           full(sp.px) + "," + full(sp.py) + "\n";
  };
  for (std::size_t k = 0; k < p.vertices.size(); ++k) row("vertex" + std::to_string(k + 1), p.vertices[k]);
  row("shapley", phi);
  return out;
}

inline void print_table(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
    }
    os << "\n";
  }
}

inline std::string status_name(SolveStatus s) { return std::string(to_string(s)); }

}  // namespace detail

inline int cmd_game(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using namespace detail;
  const Scenario s = load_scenario(cfg.input);
  if (auto diags = validate_scenario(s); !diags.empty()) {
    err << format_diagnostics(diags);
    return kExitUsage;
  }
  const int n = s.players();
  CharacteristicFunction c(n);
  std::vector<std::shared_ptr<const CoalitionValue>> values;
  bool infeasible = false, exhausted = false;
  if (cfg.cfn_override) {
    c = load_cfn(*cfg.cfn_override);
    if (c.players() != n) {
      err << "override has " << c.players() << " players, scenario has " << n << "\n";
      return kExitUsage;
    }
    if (auto miss = c.first_missing()) {
      err << "IncompleteFunction: missing coalition " << miss->to_string() << "\n";
      return kExitUsage;
    }
  } else {
    SolveOptions opts = cfg.solve;
    CharacteristicResult res = characteristic_function(s, opts);
    c = res.c;
    values = res.values;
    infeasible = res.any_infeasible;
    exhausted = !res.all_optimal && !infeasible;
  }
  bool unsolved = false;  // some coalition has no incumbent yet, only because of the budget
  for (Coalition t : coalition_iter(n)) {
    if (std::isfinite(c.cost(t))) continue;
    if (values.empty()) {
      infeasible = true;
      err << "Infeasible " << t.to_string() << "\n";
    } else if (values[t.mask() - 1]->status == SolveStatus::kInfeasible) {
      infeasible = true;
      err << "Infeasible " << t.to_string() << ": " << values[t.mask() - 1]->certificate << "\n";
    } else {
      unsolved = true;
      err << "NoIncumbent " << t.to_string() << ": budget exhausted before a feasible plan\n";
    }
  }

  const auto dir = prepare_out(cfg);
  std::string table = "coalition,value_usd";
  std::string table_full = "coalition,value_usd";
  for (int i = 1; i <= n; ++i) {
    table += ",phi" + std::to_string(i);
    table_full += ",phi" + std::to_string(i);
  }
  table += ",energy_kwh\n";
  table_full += ",energy_kwh,status,solver_nodes,gap\n";
  std::vector<std::vector<std::string>> shown;
  {
    std::vector<std::string> head{"coalition", "value($)"};
    for (int i = 1; i <= n; ++i) head.push_back("phi" + std::to_string(i));
    head.push_back("E(kWh)");
    shown.push_back(head);
  }
  for (Coalition t : coalition_iter(n)) {
    std::vector<std::string> sh(n), sh_full(n);
    if (auto shares = row_shares(c, t)) {
      const auto members = t.members();
      for (std::size_t k = 0; k < members.size(); ++k) {
        sh[members[k] - 1] = fixed3(shares->x[k]);
        sh_full[members[k] - 1] = full(shares->x[k]);
      }
    }
    const std::string name = csv_quote(t.to_string());
    table += name + "," + fixed3(c.cost(t));
    table_full += name + "," + full(c.cost(t));
    std::vector<std::string> row{t.to_string(), fixed3(c.cost(t))};
    for (int i = 0; i < n; ++i) {
      table += "," + sh[i];
      table_full += "," + sh_full[i];
      row.push_back(sh[i].empty() ? "-" : sh[i]);
    }
    table += "," + fixed3(c.energy(t)) + "\n";
    table_full += "," + full(c.energy(t));
    if (!values.empty()) {
      const auto& v = *values[t.mask() - 1];
      table_full += "," + status_name(v.status) + "," + std::to_string(v.nodes) + "," +
                    full(v.gap());
    } else {
      table_full += ",override,0,0";
    }
    table_full += "\n";
    row.push_back(fixed3(c.energy(t)));
    shown.push_back(row);
  }
  write_file(dir / "coalitions.csv", table);
  write_file(dir / "coalitions_full.csv", table_full);
  print_table(out, shown);

  if (!values.empty() && values.back()->feasible()) {
    write_file(dir / "grand_routes.csv", routes_csv(values.back()->solution));
    write_file(dir / "grand_grid_state.csv", grid_state_csv(s, values.back()->solution));
  }
  if (infeasible) {
    write_file(dir / "core.txt", "[core]\nstatus=undefined\nreason=infeasible coalition\n");
    return kExitInfeasible;
  }
  if (unsolved) {
    write_file(dir / "core.txt", "[core]\nstatus=undefined\nreason=no incumbent within budget\n");
    return kExitBudgetExhausted;
  }

  const Allocation phi = shapley(c);
  const CoreReport rep = core_report(c, phi);
  write_file(dir / "core.txt", core_summary(c, phi, rep));
  if (rep.polytope) {
    write_file(dir / "core_vertices.csv", core_vertices_csv(c, *rep.polytope));
    if (n == 3 && c.cost(Coalition::grand(3)) != 0.0) {
      write_file(dir / "core_simplex.csv", simplex_csv(c, *rep.polytope, phi));
    }
  } else {
    std::error_code ec;
    std::filesystem::remove(dir / "core_vertices.csv", ec);
    std::filesystem::remove(dir / "core_simplex.csv", ec);
  }
  out << "core: " << (rep.feasible ? "nonempty" : "empty")
      << "; shapley in core: " << (rep.shapley_check.in_core ? "yes" : "no") << "\n";
  if (!rep.feasible) return kExitEmptyCore;
  if (exhausted) return kExitBudgetExhausted;
  return kExitOk;
}

inline int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using namespace detail;
  const Scenario s = load_scenario(cfg.input);
  if (auto diags = validate_scenario(s); !diags.empty()) {
    err << format_diagnostics(diags);
    return kExitUsage;
  }
  BenchmarkResult res;
  if (cfg.mode == BenchMode::kAware) {
    AwareOptions o;
    o.seed = cfg.seed;
    o.solve = cfg.solve;
    if (cfg.samples) {
      o.mode = AwareOptions::Mode::kSampled;
      o.samples = *cfg.samples;
    }
    res = run_aggregator_aware(s, o);
  } else {
    res = run_aggregator_blind(s, cfg.solve);
  }
  const auto dir = prepare_out(cfg);
  const std::string stem = "bench_" + std::string(to_string(res.mode));
  std::string table = "aggregator,value_usd,energy_kwh\n";
  std::string table_full = "aggregator,value_usd,energy_kwh,value_se,energy_se\n";
  std::vector<std::vector<std::string>> shown{{"aggregator", "value($)", "E(kWh)"}};
  for (const auto& r : res.rows) {
    table += std::to_string(r.aggregator) + "," + fixed3(r.cost) + "," + fixed3(r.energy_kwh) + "\n";
    table_full += std::to_string(r.aggregator) + "," + full(r.cost) + "," + full(r.energy_kwh) +
                  "," + full(r.cost_se) + "," + full(r.energy_se) + "\n";
    shown.push_back({std::to_string(r.aggregator), fixed3(r.cost), fixed3(r.energy_kwh)});
  }
  std::string meta = "[bench]\nmode=" + std::string(to_string(res.mode)) + "\n";
  if (res.mode == BenchMode::kAware) {
    meta += std::string("exact=") + (res.exact ? "1" : "0") + "\n";
    meta += "samples=" + std::to_string(res.samples) + "\n";
    meta += "seed=" + std::to_string(res.seed) + "\n";
    meta += "infeasible_mass=" + full(res.infeasible_mass) + "\n";
  }
  meta += "status=" + status_name(res.status) + "\n";
  meta += "total_cost=" + full(res.total_cost()) + "\n";
  if (!res.certificate.empty()) meta += "certificate=" + csv_quote(res.certificate) + "\n";
  write_file(dir / (stem + ".csv"), table);
  write_file(dir / (stem + "_full.csv"), table_full);
  write_file(dir / (stem + "_meta.txt"), meta);
  print_table(out, shown);
  if (res.mode == BenchMode::kAware) {
    out << (res.exact ? "exact expectation" : "monte carlo, " + std::to_string(res.samples) + " samples")
        << "; infeasible mass " << full(res.infeasible_mass) << "\n";
  }
  if (res.status == SolveStatus::kInfeasible) {
    err << "Infeasible: " << res.certificate << "\n";
    return kExitInfeasible;
  }
  if (res.status == SolveStatus::kBudgetExhausted) return kExitBudgetExhausted;
  return kExitOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  using namespace detail;
  const SweepSpec spec = load_sweep_spec(cfg.input);
  const SweepResult res = run_sweep(spec, cfg.solve);
  const auto dir = prepare_out(cfg);
  std::string table = "nodes,aggregators,status,cost_usd,energy_kwh\n";
  std::string table_full = "nodes,aggregators,status,cost_usd,energy_kwh,solver_nodes,certificate\n";
  std::vector<std::vector<std::string>> shown{{"J", "n", "status", "cost($)", "E(kWh)"}};
  bool exhausted = false;
  for (const auto& r : res.rows) {
    const std::string st = status_name(r.status);
    exhausted = exhausted || r.status == SolveStatus::kBudgetExhausted;
    table += std::to_string(r.nodes) + "," + std::to_string(r.aggregators) + "," + st + "," +
             fixed3(r.cost) + "," + fixed3(r.energy_kwh) + "\n";
    table_full += std::to_string(r.nodes) + "," + std::to_string(r.aggregators) + "," + st +
                  "," + full(r.cost) + "," + full(r.energy_kwh) + "," +
                  std::to_string(r.solver_nodes) + "," + csv_quote(r.certificate) + "\n";
    shown.push_back({std::to_string(r.nodes), std::to_string(r.aggregators), st, fixed3(r.cost),
                     fixed3(r.energy_kwh)});
  }
  std::string trend = "nodes,energy_non_increasing\n";
  for (const auto& [j, ok] : res.trend) trend += std::to_string(j) + "," + (ok ? "1" : "0") + "\n";
  write_file(dir / "sweep.csv", table);
  write_file(dir / "sweep_full.csv", table_full);
  write_file(dir / "sweep_trend.csv", trend);
  print_table(out, shown);
  for (const auto& [j, ok] : res.trend) {
    out << "J=" << j << ": energy " << (ok ? "non-increasing" : "NOT non-increasing") << " in n\n";
  }
  return exhausted ? kExitBudgetExhausted : kExitOk;
}

inline int cmd_shapley_file(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using namespace detail;
  const CharacteristicFunction c = load_cfn(cfg.input);
  if (auto miss = c.first_missing()) {
    err << "IncompleteFunction: missing coalition " << miss->to_string() << "\n";
    return kExitUsage;
  }
  const Allocation phi = shapley(c);
  const CoreReport rep = core_report(c, phi);
  out << "shapley:";
  for (double v : phi.x) out << " " << fixed3(v);
  out << "\ncore: " << (rep.feasible ? "nonempty" : "empty") << "\n";
  if (rep.feasible) {
    for (int i = 0; i < c.players(); ++i) {
      out << "player " << i + 1 << " core max: " << fixed3(rep.player_max[i]) << "\n";
    }
  }
  out << "shapley in core: " << (rep.shapley_check.in_core ? "yes" : "no") << "\n";
  for (const auto& v : rep.shapley_check.violations) {
    out << "  violated " << (v.efficiency ? "efficiency" : v.coalition.to_string())
        << " by " << full(v.excess) << "\n";
  }
  if (cfg.out_dir) {
    const auto dir = prepare_out(cfg);
    std::string csv = "player,shapley\n";
    for (int i = 0; i < c.players(); ++i) csv += std::to_string(i + 1) + "," + full(phi.x[i]) + "\n";
    write_file(dir / "shapley.csv", csv);
    write_file(dir / "core.txt", core_summary(c, phi, rep));
    if (rep.polytope) write_file(dir / "core_vertices.csv", core_vertices_csv(c, *rep.polytope));
  }
  return rep.feasible ? kExitOk : kExitEmptyCore;
}

struct IngestConfig {
  std::string csv;
  std::string scenario;  // transport nodes with lat/lon
  std::string window_start, window_end;
  BoundingBox box;
  ColumnMap columns;
  std::optional<std::filesystem::path> out_dir;
};

inline int cmd_ingest(const IngestConfig& cfg, std::ostream& out, std::ostream& err) {
  const Scenario s = load_scenario(cfg.scenario);
  const auto start = parse_datetime(cfg.window_start);
  const auto end = parse_datetime(cfg.window_end);
  if (!start || !end || !(*start < *end)) {
    err << "invalid time window\n";
    return kExitUsage;
  }
  const TripParseResult parsed = parse_trip_csv(cfg.csv, cfg.box, cfg.columns);
  const SnapResult snapped = snap_to_nodes(parsed.records, s.transport, *start, *end, s.step_minutes);
  std::string reqs = "[requests]\n";
  for (const Request& r : snapped.requests) {
    reqs += "id=" + std::to_string(r.id) + " origin=" + std::to_string(r.origin) +
            " destination=" + std::to_string(r.destination) +
            " earliest=" + std::to_string(r.earliest_pickup_step) +
            " passengers=" + std::to_string(r.passengers) + "\n";
  }
  std::string report = rejection_report(parsed);
  report += "\n[window]\ndropped_outside=" + std::to_string(snapped.dropped_outside_window) +
            " dropped_same_node=" + std::to_string(snapped.dropped_same_node) +
            " requests=" + std::to_string(snapped.requests.size()) + "\n";
  if (cfg.out_dir) {
    std::filesystem::create_directories(*cfg.out_dir);
    detail::write_file(*cfg.out_dir / "requests.scn", reqs);
    detail::write_file(*cfg.out_dir / "ingest_report.txt", report);
  }
  out << reqs << "\n" << report;
  return kExitOk;
}

}  // namespace evcoop

#endif  // EVCOOP_HARNESS_HPP
