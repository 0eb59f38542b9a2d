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

#ifndef EVCOOP_CHARACTERISTIC_HPP
#define EVCOOP_CHARACTERISTIC_HPP

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "evcoop/coalition.hpp"
#include "evcoop/game.hpp"
#include "evcoop/routing_solver.hpp"
#include "evcoop/scenario.hpp"

namespace evcoop {

// Memoized coalition_value over all requests. Safe for concurrent use: two
// racing solves of one coalition produce identical values, the later insert
// wins.
class CoalitionOracle {
 public:
  explicit CoalitionOracle(const Scenario& s, SolveOptions opts = {})
      : scenario_(s), opts_(opts) {}

  std::shared_ptr<const CoalitionValue> value(Coalition c) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = cache_.find(c.mask()); it != cache_.end()) return it->second;
    }
    auto v = std::make_shared<const CoalitionValue>(coalition_value(scenario_, c, std::nullopt, opts_));
    std::lock_guard<std::mutex> lock(mu_);
    solver_nodes_ += v->nodes;
    cache_[c.mask()] = v;
    return v;
  }

  long long solver_nodes() const {
    std::lock_guard<std::mutex> lock(mu_);
    return solver_nodes_;
  }
  const Scenario& scenario() const { return scenario_; }

 private:
  const Scenario& scenario_;
  SolveOptions opts_;
  mutable std::mutex mu_;
  std::map<std::uint32_t, std::shared_ptr<const CoalitionValue>> cache_;
  long long solver_nodes_ = 0;
};

struct CharacteristicResult {
  CharacteristicFunction c;  // infeasible coalitions carry kInfeasibleCost
  std::vector<std::shared_ptr<const CoalitionValue>> values;  // bitmask order
  bool all_optimal = true;
  bool any_infeasible = false;
};

inline CharacteristicResult characteristic_function(CoalitionOracle& oracle) {
  const int n = oracle.scenario().players();
  CharacteristicResult out{CharacteristicFunction(n), {}, true, false};
  for (Coalition s : coalition_iter(n)) {
    auto v = oracle.value(s);
    out.c.set(s, v->cost, v->feasible() ? v->energy_kwh : kInfeasibleCost);
    if (v->status != SolveStatus::kOptimal) out.all_optimal = false;
    if (v->status == SolveStatus::kInfeasible) out.any_infeasible = true;
    out.values.push_back(std::move(v));
  }
  return out;
}

inline CharacteristicResult characteristic_function(const Scenario& s,
                                                    const SolveOptions& opts = {}) {
  CoalitionOracle oracle(s, opts);
  return characteristic_function(oracle);
}

}  // namespace evcoop

#endif  // EVCOOP_CHARACTERISTIC_HPP
