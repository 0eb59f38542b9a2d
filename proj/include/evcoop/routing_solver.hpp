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

#ifndef EVCOOP_ROUTING_SOLVER_HPP
#define EVCOOP_ROUTING_SOLVER_HPP

// Best-first branch and bound over discrete vehicle plans.
//
// Plans are built one vehicle at a time: the open vehicle either appends
// "[charge stop] + serve request" or is closed, after which the next vehicle
// opens. Each complete plan set has exactly one construction path. Leaves
// are priced exactly with the charging LP. Pruning:
//   * lower bound: committed distance, each unserved request's own leg plus
//     its cheapest possible approach, and the charging energy that any
//     completion must buy, priced at the cheapest usable tariff;
//   * interchangeable vehicles (same owner, depot, battery, chargers) take
//     requests in increasing order of their first request;
//   * a vehicle with charge stops is discarded at closing time when the same
//     route without them needs no charging (that route is never worse).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "evcoop/routing_model.hpp"

namespace evcoop {

struct SolveOptions {
  long long node_budget = 20'000'000;
  double time_budget_seconds = 0.0;  // 0 = none
  std::ostream* log = nullptr;       // progress ticks: nodes, incumbent, bound
  long long log_interval = 100'000;
};

enum class SolveStatus { kOptimal, kInfeasible, kBudgetExhausted };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kBudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

struct CoalitionValue {
  SolveStatus status = SolveStatus::kInfeasible;
  double cost = std::numeric_limits<double>::infinity();
  double energy_kwh = std::numeric_limits<double>::infinity();
  RoutingSolution solution;
  std::vector<routing::Plan> plans;
  std::string certificate;  // set when infeasible
  double bound = 0.0;       // best lower bound (== cost when optimal)
  long long nodes = 0;      // expanded nodes

  bool feasible() const { return std::isfinite(cost); }
  double gap() const { return feasible() ? cost - bound : std::numeric_limits<double>::infinity(); }
};

namespace routing {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& in, const SolveOptions& opts) : in_(in), opts_(opts) {
    const int nv = static_cast<int>(in.veh.size());
    const int nr = static_cast<int>(in.req.size());
    all_served_ = nr == 32 ? 0xffffffffu : ((std::uint32_t{1} << nr) - 1);
    suffix_depot_km_.assign(nv + 1, std::vector<double>(nr, lp::kInf));
    suffix_soc_.assign(nv + 1, 0.0);
    suffix_min_cons_.assign(nv + 1, lp::kInf);
    for (int v = nv - 1; v >= 0; --v) {
      suffix_soc_[v] = suffix_soc_[v + 1] + in.veh[v].soc0;
      suffix_min_cons_[v] = std::min(suffix_min_cons_[v + 1], in.veh[v].cons);
      for (int r = 0; r < nr; ++r) {
        suffix_depot_km_[v][r] = std::min(suffix_depot_km_[v + 1][r],
                                          in.sp.distance(in.veh[v].depot, in.req[r].origin));
      }
    }
  }

  CoalitionValue run() {
    CoalitionValue out;
    start_ = std::chrono::steady_clock::now();
    if (in_.req.size() > 31) {
      throw Error(Errc::kInvalidArgument, "at most 31 requests per solve");
    }
    if (in_.base_infeasible_step >= 0) return out;
    if (in_.veh.empty()) {
      if (in_.req.empty()) {
        finish_empty(out);
        return out;
      }
      out.certificate = "coalition has no vehicles";
      return out;
    }

    Node root;
    root.vehicle = 0;
    root.actor = -1;
    root.pos = static_cast<std::int16_t>(in_.veh[0].depot);
    root.lb = lower_bound(root);
    arena_.push_back(root);

    // Depth-first dive for a first incumbent, then best-first on everything
    // left on the dive stack.
    std::vector<int> stack{0};
    while (!stack.empty() && !have_incumbent() && !out_of_budget()) {
      const int id = stack.back();
      stack.pop_back();
      if (arena_[id].lb >= cutoff()) continue;
      auto kids = expand(id);
      std::stable_sort(kids.begin(), kids.end(),
                       [&](int a, int b) { return arena_[a].lb > arena_[b].lb; });
      for (int k : kids) stack.push_back(k);
    }
    for (int id : stack) push(id);

    while (!heap_.empty() && !out_of_budget()) {
      const auto [lb, seq, id] = heap_.top();
      if (lb >= cutoff()) break;
      heap_.pop();
      for (int k : expand(id)) push(k);
    }

    double bound = have_incumbent() ? incumbent_cost_ : lp::kInf;
    bool exhausted = false;
    while (!heap_.empty()) {
      const auto [lb, seq, id] = heap_.top();
      heap_.pop();
      if (lb < cutoff()) {
        exhausted = true;
        bound = std::min(bound, lb);
      }
    }
    out.nodes = expanded_;
    if (have_incumbent()) {
      out.cost = incumbent_cost_;
      out.bound = exhausted ? bound : incumbent_cost_;
      out.plans = incumbent_plans_;
      out.solution = build_solution(in_, *incumbent_eval_);
      out.energy_kwh = out.solution.total_energy_kwh;
      out.status = exhausted ? SolveStatus::kBudgetExhausted : SolveStatus::kOptimal;
    } else {
      out.status = exhausted ? SolveStatus::kBudgetExhausted : SolveStatus::kInfeasible;
      out.bound = bound;
    }
    return out;
  }

 private:
  struct Node {
    int parent = -1;
    Stop charge;           // optional charge stop before the action
    std::int16_t serve = -1;  // request served, -1 for a close
    std::int16_t actor = -1;  // vehicle acted upon
    std::int16_t vehicle = 0;  // open vehicle after this node
    std::int16_t pos = 0;
    std::int16_t first_req = -1;
    std::int16_t prev_first_req = -1;
    int t = 0;
    std::uint32_t served = 0;
    bool has_charge = false;
    double km = 0;             // all vehicles
    double cons = 0;           // open vehicle
    double cons_free = 0;      // open vehicle without its charge detours
    double max_charge = 0;     // open vehicle, upper bound on energy bought
    double since_charge = 0;   // open vehicle, consumption since last charge
    double deficit_closed = 0; // sum over closed vehicles of (cons - soc0)+
    double lb = 0;
  };

  bool have_incumbent() const { return incumbent_eval_.has_value(); }
  double cutoff() const {
    if (!have_incumbent()) return lp::kInf;
    return incumbent_cost_ - 1e-9 * std::max(1.0, std::abs(incumbent_cost_));
  }

  bool out_of_budget() {
    if (expanded_ >= opts_.node_budget) return true;
    if (opts_.time_budget_seconds > 0 && (expanded_ & 1023) == 0) {
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start_).count();
      if (secs > opts_.time_budget_seconds) return true;
    }
    return false;
  }

  void push(int id) {
    if (arena_[id].lb < cutoff()) heap_.emplace(arena_[id].lb, seq_++, id);
  }

  void finish_empty(CoalitionValue& out) {
    incumbent_eval_ = Evaluation{};
    out.status = SolveStatus::kOptimal;
    out.cost = 0.0;
    out.energy_kwh = 0.0;
    out.bound = 0.0;
    Evaluation ev;
    ev.timelines.assign(in_.veh.size(), Timeline{});
    ev.energy.assign(in_.veh.size(), {});
    out.solution = build_solution(in_, ev);
    out.plans.assign(in_.veh.size(), Plan{});
  }

  double lower_bound(const Node& n) const {
    const int nv = static_cast<int>(in_.veh.size());
    const int nr = static_cast<int>(in_.req.size());
    const bool open = n.vehicle < nv;
    double legs = 0.0, approach = 0.0;
    for (int r = 0; r < nr; ++r) {
      if (n.served >> r & 1u) continue;
      const RequestInfo& rq = in_.req[r];
      double best = lp::kInf;
      if (open) {
        best = std::min(best, in_.sp.distance(n.pos, rq.origin));
        best = std::min(best, suffix_depot_km_[n.vehicle + 1][r]);
      }
      for (int q = 0; q < nr; ++q) {
        if (q == r || (n.served >> q & 1u)) continue;
        best = std::min(best, in_.sp.distance(in_.req[q].dest, rq.origin));
      }
      if (best == lp::kInf) return lp::kInf;
      legs += rq.leg_km;
      approach += best;
    }
    double need = n.deficit_closed;
    if (open) {
      const VehicleInfo& vi = in_.veh[n.vehicle];
      need += std::max(0.0, n.cons - vi.soc0);
      const double pool = (legs + approach) * suffix_min_cons_[n.vehicle];
      const double surplus =
          std::max(0.0, vi.soc0 - n.cons) + suffix_soc_[n.vehicle + 1];
      need += std::max(0.0, pool - surplus);
    }
    double energy_cost = 0.0;
    if (need > kEnergyTol) {
      if (in_.min_price == lp::kInf) return lp::kInf;
      energy_cost = in_.weights.energy_price_weight * in_.min_price * need;
    }
    return in_.weights.distance_weight * (n.km + legs + approach) + energy_cost;
  }

  // Moves the open vehicle to `to`; false if its battery cannot make it.
  bool drive(Node& n, const VehicleInfo& vi, int to) const {
    const double km = in_.sp.distance(n.pos, to);
    const int steps = in_.sp.travel_steps(n.pos, to);
    n.km += km;
    n.cons += km * vi.cons;
    n.since_charge += km * vi.cons;
    n.t += steps;
    n.pos = static_cast<std::int16_t>(to);
    if (vi.soc0 + n.max_charge - n.cons < -kEnergyTol) return false;
    if (n.has_charge && n.since_charge > vi.capacity + kEnergyTol) return false;
    return n.t <= in_.horizon;
  }

  // Appends a charge stop (charger, dwell) to the open vehicle.
  bool charge(Node& n, const VehicleInfo& vi, int c, int dwell) const {
    if (!drive(n, vi, in_.chg[c].node)) return false;
    if (n.t + dwell > in_.horizon) return false;
    double cap = 0.0;
    for (int t = n.t; t < n.t + dwell; ++t) cap += in_.step_energy_cap(c, t);
    n.max_charge += std::min(cap, vi.capacity);
    n.since_charge = 0.0;
    n.has_charge = true;
    n.t += dwell;
    return true;
  }

  int add(Node n) {
    n.lb = lower_bound(n);
    if (n.lb >= cutoff()) return -1;
    arena_.push_back(n);
    return static_cast<int>(arena_.size()) - 1;
  }

  std::vector<int> expand(int id) {
    ++expanded_;
    if (opts_.log && opts_.log_interval > 0 && expanded_ % opts_.log_interval == 0) {
      *opts_.log << "nodes=" << expanded_ << " incumbent="
                 << (have_incumbent() ? incumbent_cost_ : lp::kInf)
                 << " bound=" << (heap_.empty() ? arena_[id].lb : std::get<0>(heap_.top()))
                 << "\n";
    }
    std::vector<int> kids;
    const Node base = arena_[id];
    const int nv = static_cast<int>(in_.veh.size());
    const int nr = static_cast<int>(in_.req.size());
    const int v = base.vehicle;
    if (v >= nv) return kids;
    const VehicleInfo& vi = in_.veh[v];

    // Close the open vehicle (optionally charging before the return leg).
    auto close_from = [&](Node n, Stop pre) {
      if (in_.weights.return_to_depot && !drive(n, vi, vi.depot)) return;
      if (n.has_charge) {
        double free = n.cons_free;
        if (in_.weights.return_to_depot) {
          // Charge stops always follow the last serve, so the direct return
          // starts where the vehicle was before them.
          free += in_.sp.distance(close_pos_before_charge_, vi.depot) * vi.cons;
        }
        if (free <= vi.soc0 + kEnergyTol) return;
      }
      Node c;
      c.parent = id;
      c.charge = pre;
      c.serve = -1;
      c.actor = static_cast<std::int16_t>(v);
      c.vehicle = static_cast<std::int16_t>(v + 1);
      c.served = n.served;
      c.km = n.km;
      c.deficit_closed = n.deficit_closed + std::max(0.0, n.cons - vi.soc0);
      c.prev_first_req = n.first_req;
      if (n.served == all_served_) {
        evaluate_leaf(c);
        return;
      }
      if (v + 1 >= nv) return;
      c.pos = static_cast<std::int16_t>(in_.veh[v + 1].depot);
      if (const int k = add(c); k >= 0) kids.push_back(k);
    };
    close_pos_before_charge_ = base.pos;
    close_from(base, Stop{});
    if (in_.weights.return_to_depot) {
      for (int c : vi.chargers) {
        const int kmax = in_.max_dwell(v, c);
        for (int d = 1; d <= kmax; ++d) {
          Node n = base;
          if (!charge(n, vi, c, d)) break;
          close_from(n, Stop{-1, static_cast<std::int16_t>(c), static_cast<std::int16_t>(d)});
        }
      }
    }

    // Serve another request.
    if (vi.twin_of_prev && base.prev_first_req < 0) return kids;
    for (int r = 0; r < nr; ++r) {
      if (base.served >> r & 1u) continue;
      const RequestInfo& rq = in_.req[r];
      if (rq.passengers > vi.seats) continue;
      if (vi.twin_of_prev && base.first_req < 0 && r <= base.prev_first_req) continue;
      const double free_add = (in_.sp.distance(base.pos, rq.origin) + rq.leg_km) * vi.cons;
      auto serve_from = [&](Node n, Stop pre) {
        if (!drive(n, vi, rq.origin)) return;
        n.t = std::max(n.t, rq.earliest);
        if (!drive(n, vi, rq.dest)) return;
        n.parent = id;
        n.charge = pre;
        n.serve = static_cast<std::int16_t>(r);
        n.actor = static_cast<std::int16_t>(v);
        n.served |= std::uint32_t{1} << r;
        n.cons_free += free_add;
        if (n.first_req < 0) n.first_req = static_cast<std::int16_t>(r);
        if (const int k = add(n); k >= 0) kids.push_back(k);
      };
      serve_from(base, Stop{});
      for (int c : vi.chargers) {
        const int kmax = in_.max_dwell(v, c);
        for (int d = 1; d <= kmax; ++d) {
          Node n = base;
          if (!charge(n, vi, c, d)) break;
          serve_from(n, Stop{-1, static_cast<std::int16_t>(c), static_cast<std::int16_t>(d)});
        }
      }
    }
    return kids;
  }

  std::vector<Plan> reconstruct(const Node& leaf) const {
    std::vector<Plan> plans(in_.veh.size());
    const Node* n = &leaf;
    while (n->actor >= 0) {
      Plan& p = plans[n->actor];
      if (n->serve >= 0) p.push_back(Stop{n->serve, -1, 0});
      if (n->charge.dwell > 0) p.push_back(n->charge);
      n = &arena_[n->parent];
    }
    for (auto& p : plans) std::reverse(p.begin(), p.end());
    return plans;
  }

  void evaluate_leaf(const Node& leaf) {
    if (leaf.km * in_.weights.distance_weight >= cutoff()) return;
    std::vector<Plan> plans = reconstruct(leaf);
    auto ev = evaluate_plans(in_, plans);
    if (!ev) return;
    if (!have_incumbent() || ev->objective < cutoff()) {
      incumbent_cost_ = ev->objective;
      incumbent_plans_ = std::move(plans);
      incumbent_eval_ = std::move(ev);
    }
  }

  const Instance& in_;
  SolveOptions opts_;
  std::uint32_t all_served_ = 0;
  std::vector<std::vector<double>> suffix_depot_km_;
  std::vector<double> suffix_soc_;
  std::vector<double> suffix_min_cons_;
  int close_pos_before_charge_ = 0;

  std::vector<Node> arena_;
  using Entry = std::tuple<double, long long, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
  long long seq_ = 0;
  long long expanded_ = 0;
  std::chrono::steady_clock::time_point start_;

  double incumbent_cost_ = lp::kInf;
  std::vector<Plan> incumbent_plans_;
  std::optional<Evaluation> incumbent_eval_;
};

// Explains why no plan exists: the base grid, or the earliest request that no
// single vehicle can serve on its own, or a joint conflict.
inline std::string infeasibility_certificate(const Instance& in) {
  const Scenario& s = *in.scenario;
  if (in.base_infeasible_step >= 0) {
    return "grid base load violates voltage bounds at step " +
           std::to_string(in.base_infeasible_step);
  }
  std::vector<int> order(in.req.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::make_pair(in.req[a].earliest, s.requests[in.req[a].scn].id) <
           std::make_pair(in.req[b].earliest, s.requests[in.req[b].scn].id);
  });
  const int nv = static_cast<int>(in.veh.size());
  for (int r : order) {
    bool ok = false;
    for (int v = 0; v < nv && !ok; ++v) {
      if (in.req[r].passengers > in.veh[v].seats) continue;
      std::vector<Plan> plans(nv);
      plans[v] = {Stop{static_cast<std::int16_t>(r), -1, 0}};
      ok = evaluate_plans(in, plans).has_value();
      for (int c : in.veh[v].chargers) {
        for (int d = 1; d <= in.max_dwell(v, c) && !ok; ++d) {
          plans[v] = {Stop{-1, static_cast<std::int16_t>(c), static_cast<std::int16_t>(d)},
                      Stop{static_cast<std::int16_t>(r), -1, 0}};
          ok = evaluate_plans(in, plans).has_value();
        }
      }
    }
    if (!ok) {
      return "request " + std::to_string(s.requests[in.req[r].scn].id) +
             " cannot be served by any vehicle within horizon/battery/grid limits";
    }
  }
  if (in.veh.empty()) return "coalition has no vehicles";
  return "requests cannot all be served jointly; earliest request " +
         std::to_string(s.requests[in.req[order.front()].scn].id);
}

}  // namespace routing

inline CoalitionValue solve_routing(const Scenario& s, const RoutingProblem& p,
                                    const SolveOptions& opts = {}) {
  const routing::Instance in = routing::build_instance(s, p);
  routing::BranchAndBound bb(in, opts);
  CoalitionValue out = bb.run();
  if (out.status == SolveStatus::kInfeasible) {
    out.certificate = routing::infeasibility_certificate(in);
  }
  return out;
}

// c(S) and E(S): optimal routing of the coalition's pooled fleets and
// chargers over all requests (or an explicit subset of request ids).
inline CoalitionValue coalition_value(
    const Scenario& s, Coalition coalition,
    const std::optional<std::vector<int>>& request_ids = std::nullopt,
    const SolveOptions& opts = {}) {
  return solve_routing(s, make_coalition_problem(s, coalition, request_ids), opts);
}

}  // namespace evcoop

#endif  // EVCOOP_ROUTING_SOLVER_HPP
