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

#ifndef EVCOOP_TESTS_BRUTE_FORCE_HPP
#define EVCOOP_TESTS_BRUTE_FORCE_HPP

// Exhaustive reference for the routing model. Enumerates every split of the
// requests into per-vehicle ordered sequences and every optional charge stop
// (charger, dwell) before each pickup or before the final return, then prices
// each candidate with its own charging LP. Shares only the LP solver with the
// library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "evcoop/grid.hpp"
#include "evcoop/lp.hpp"
#include "evcoop/routing_model.hpp"
#include "evcoop/scenario.hpp"

namespace evcoop::testing {

class BruteForce {
 public:
  BruteForce(const Scenario& s, const RoutingProblem& p) : s_(s), p_(p) {
    const int nn = static_cast<int>(s.transport.nodes.size());
    km_.assign(nn, std::vector<double>(nn, kInf));
    st_.assign(nn, std::vector<int>(nn, 1 << 20));
    for (int i = 0; i < nn; ++i) {
      km_[i][i] = 0;
      st_[i][i] = 0;
    }
    auto idx = [&](int id) { return s.transport.node_index(id); };
    auto lt = [](double k1, int s1, double k2, int s2) { return k1 < k2 || (k1 == k2 && s1 < s2); };
    for (const auto& e : s.transport.edges) {
      const int a = idx(e.from), b = idx(e.to);
      if (lt(e.distance_km, e.travel_steps, km_[a][b], st_[a][b])) {
        km_[a][b] = e.distance_km;
        st_[a][b] = e.travel_steps;
      }
      if (!e.directed && lt(e.distance_km, e.travel_steps, km_[b][a], st_[b][a])) {
        km_[b][a] = e.distance_km;
        st_[b][a] = e.travel_steps;
      }
    }
    for (int m = 0; m < nn; ++m)
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j)
          if (lt(km_[i][m] + km_[m][j], st_[i][m] + st_[m][j], km_[i][j], st_[i][j])) {
            km_[i][j] = km_[i][m] + km_[m][j];
            st_[i][j] = st_[i][m] + st_[m][j];
          }

    // Grid: base voltages and per-kW sensitivities by finite difference.
    const int nb = static_cast<int>(s.grid.buses.size());
    H_ = s.horizon_steps;
    const GridState base = solve_lindistflow(s.grid, LoadMatrix(nb, H_));
    base_ok_ = base.all_feasible();
    vbase_ = base.v_pu2;
    sens_.assign(nb, std::vector<double>(nb, 0.0));
    for (int b = 0; b < nb; ++b) {
      LoadMatrix one(nb, 1);
      one.at(b, 0) = 1.0;
      const GridState with = solve_lindistflow(s.grid, one);
      const GridState without = solve_lindistflow(s.grid, LoadMatrix(nb, 1));
      for (int j = 0; j < nb; ++j) sens_[j][b] = without.v_pu2[0][j] - with.v_pu2[0][j];
    }
  }

  // Minimum objective, or nullopt if no candidate is feasible.
  std::optional<double> solve() {
    best_.reset();
    evaluated_ = 0;
    if (!base_ok_) return std::nullopt;
    remaining_.assign(p_.requests.begin(), p_.requests.end());
    seqs_.assign(p_.vehicles.size(), {});
    assign_vehicle(0);
    return best_;
  }
  long long evaluated() const { return evaluated_; }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Stop {
    int request = -1;  // scenario request index; -1 = final return slot
    int charger = -1;  // scenario charger index, -1 = none
    int dwell = 0;
  };

  int node(int id) const { return s_.transport.node_index(id); }

  std::vector<std::pair<int, int>> charge_options(int v) const {
    std::vector<std::pair<int, int>> out{{-1, 0}};
    const Vehicle& veh = s_.vehicles[v];
    for (int c : p_.usable_chargers) {
      if (!p_.may_use(s_, v, c)) continue;
      const double per_step = s_.chargers[c].max_rate_kw * s_.step_hours();
      const int k = std::max(1, static_cast<int>(std::ceil(veh.battery_capacity_kwh / per_step - 1e-12)));
      for (int d = 1; d <= k; ++d) out.emplace_back(c, d);
    }
    return out;
  }

  // Vehicle k picks an ordered subset of the remaining requests.
  void assign_vehicle(std::size_t k) {
    if (k == p_.vehicles.size()) {
      if (remaining_.empty()) choose_charges(0, 0);
      return;
    }
    extend(k);
  }

  void extend(std::size_t k) {
    assign_vehicle(k + 1);  // close this vehicle's sequence here
    for (std::size_t i = 0; i < remaining_.size(); ++i) {
      const int r = remaining_[i];
      remaining_.erase(remaining_.begin() + static_cast<long>(i));
      seqs_[k].push_back(r);
      extend(k);
      seqs_[k].pop_back();
      remaining_.insert(remaining_.begin() + static_cast<long>(i), r);
    }
  }

  // Assign a charge option to every slot (each pickup, plus the return).
  void choose_charges(std::size_t v, std::size_t slot) {
    if (v == seqs_.size()) {
      evaluate();
      return;
    }
    if (slot == 0) plans_.resize(seqs_.size());
    if (slot == 0) plans_[v].clear();
    const std::size_t slots = seqs_[v].size() + (s_.objective.return_to_depot ? 1 : 0);
    if (slot == slots) {
      choose_charges(v + 1, 0);
      return;
    }
    const int r = slot < seqs_[v].size() ? seqs_[v][slot] : -1;
    for (const auto& [c, d] : charge_options(p_.vehicles[v])) {
      plans_[v].push_back({r, c, d});
      choose_charges(v, slot + 1);
      plans_[v].pop_back();
    }
  }

  void evaluate() {
    ++evaluated_;
    lp::LinearProgram prog;
    struct Var { int step, bus; };
    std::vector<Var> vars;
    double km_total = 0.0;
    const double h = s_.step_hours();
    for (std::size_t v = 0; v < plans_.size(); ++v) {
      const Vehicle& veh = s_.vehicles[p_.vehicles[v]];
      int pos = node(s_.aggregator(veh.owner).depot);
      int t = 0;
      double cons = 0.0;
      lp::LinearProgram::Terms charged;
      auto arrive = [&](int to) {
        if (to == pos) return;
        km_total += km_[pos][to];
        cons += km_[pos][to] * veh.consumption_kwh_per_km;
        t += st_[pos][to];
        pos = to;
        // State of charge at arrival must be nonnegative.
        if (cons - veh.initial_soc_kwh > 0.0) {
          prog.add_constraint(charged, lp::Sense::kGreaterEqual, cons - veh.initial_soc_kwh);
        }
      };
      for (const Stop& st : plans_[v]) {
        if (st.charger >= 0) {
          const Charger& ch = s_.chargers[st.charger];
          arrive(node(ch.transport_node));
          const int bus = s_.grid.bus_index(ch.grid_bus);
          for (int k = 0; k < st.dwell; ++k, ++t) {
            if (t >= H_) return;
            const int j = prog.add_variable(s_.objective.energy_price_weight * ch.price_at(t),
                                            ch.max_rate_kw * h);
            vars.push_back({t, bus});
            charged.emplace_back(j, 1.0);
            prog.add_constraint(charged, lp::Sense::kLessEqual,
                                veh.battery_capacity_kwh - veh.initial_soc_kwh + cons);
          }
        }
        if (st.request >= 0) {
          const Request& rq = s_.requests[st.request];
          arrive(node(rq.origin));
          t = std::max(t, rq.earliest_pickup_step);
          arrive(node(rq.destination));
        } else {
          arrive(node(s_.aggregator(veh.owner).depot));
        }
        if (t > H_) return;
      }
      if (s_.objective.return_to_depot) arrive(node(s_.aggregator(veh.owner).depot));
      if (t > H_) return;
    }
    const double dist_cost = s_.objective.distance_weight * km_total;
    if (best_ && dist_cost >= *best_ + 1e-12) return;
    // Voltage floor at every bus for every step that carries charging.
    const int nb = static_cast<int>(s_.grid.buses.size());
    for (int t = 0; t < H_; ++t) {
      lp::LinearProgram::Terms any;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        if (vars[j].step == t) any.emplace_back(static_cast<int>(j), 1.0);
      }
      if (any.empty()) continue;
      for (int bj = 0; bj < nb; ++bj) {
        lp::LinearProgram::Terms row;
        for (const auto& [j, one] : any) {
          (void)one;
          row.emplace_back(j, sens_[bj][vars[j].bus] / h);
        }
        prog.add_constraint(std::move(row), lp::Sense::kLessEqual,
                            vbase_[t][bj] - s_.grid.buses[bj].v_min_pu2);
      }
    }
    const lp::Result res = prog.minimize();
    if (!res.optimal()) return;
    const double total = dist_cost + res.objective;
    if (!best_ || total < *best_) best_ = total;
  }

  const Scenario& s_;
  const RoutingProblem& p_;
  int H_ = 0;
  bool base_ok_ = true;
  std::vector<std::vector<double>> km_;
  std::vector<std::vector<int>> st_;
  std::vector<std::vector<double>> vbase_;
  std::vector<std::vector<double>> sens_;

  std::vector<int> remaining_;
  std::vector<std::vector<int>> seqs_;
  std::vector<std::vector<Stop>> plans_;
  std::optional<double> best_;
  long long evaluated_ = 0;
};

}  // namespace evcoop::testing

#endif  // EVCOOP_TESTS_BRUTE_FORCE_HPP
