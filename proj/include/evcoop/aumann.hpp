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

#ifndef EVCOOP_AUMANN_HPP
#define EVCOOP_AUMANN_HPP

// Incomplete-information benchmarks.
//
// Aware: each request independently picks an aggregator by the common prior;
// every aggregator then routes its own share with its own vehicles and
// chargers. States of the world are assignment profiles; aggregator i
// observes which requests it received.
//
// Blind: one dispatch over every vehicle and request, each vehicle charging
// only at its owner's chargers.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evcoop/coalition.hpp"
#include "evcoop/error.hpp"
#include "evcoop/routing_solver.hpp"
#include "evcoop/scenario.hpp"

namespace evcoop {

inline constexpr int kMaxBenchmarkRequests = 31;

// Counter-based stream: value k depends only on (seed, k).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t z = splitmix64(seed ^ splitmix64(counter));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

struct AumannModel {
  int players = 0;
  int requests = 0;
  std::vector<double> prior;  // per aggregator, positive, sums to 1

  static AumannModel uniform(int players, int requests) {
    return {players, requests, std::vector<double>(players, 1.0 / players)};
  }

  void validate() const {
    Coalition::check_player_count(players);
    if (static_cast<int>(prior.size()) != players) {
      throw Error(Errc::kInvalidPrior, "prior needs one entry per aggregator");
    }
    double sum = 0.0;
    for (double p : prior) {
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw Error(Errc::kInvalidPrior, "prior entries must be strictly positive");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(Errc::kInvalidPrior, "prior must sum to 1");
    if (requests < 0 || requests > kMaxBenchmarkRequests) {
      throw Error(Errc::kDimensionTooLarge, "at most 31 requests");
    }
  }

  // A state: profile[r] = aggregator index (0-based) serving request r.
  double probability(const std::vector<int>& profile) const {
    double p = 1.0;
    for (int a : profile) p *= prior[a];
    return p;
  }
  // Information cell of player i (0-based): the requests it was handed.
  std::uint32_t cell(int player, const std::vector<int>& profile) const {
    std::uint32_t m = 0;
    for (int r = 0; r < requests; ++r) {
      if (profile[r] == player) m |= std::uint32_t{1} << r;
    }
    return m;
  }
  double log_state_count() const {
    return requests * std::log(static_cast<double>(players));
  }
};

enum class BenchMode { kAware, kBlind };

inline std::string_view to_string(BenchMode m) {
  return m == BenchMode::kAware ? "aware" : "blind";
}

struct BenchmarkRow {
  int aggregator = 0;
  double cost = 0.0;    // expected in aware mode
  double energy_kwh = 0.0;
  double cost_se = 0.0;  // Monte Carlo standard errors, 0 when exact
  double energy_se = 0.0;
};

struct BenchmarkResult {
  BenchMode mode = BenchMode::kAware;
  std::vector<BenchmarkRow> rows;
  bool exact = true;
  long long samples = 0;
  std::uint64_t seed = 0;
  double infeasible_mass = 0.0;  // probability excluded from the averages
  SolveStatus status = SolveStatus::kOptimal;
  std::string certificate;

  double total_cost() const {
    double t = 0.0;
    for (const auto& r : rows) t += r.cost;
    return t;
  }
  double total_energy() const {
    double t = 0.0;
    for (const auto& r : rows) t += r.energy_kwh;
    return t;
  }
};

struct AwareOptions {
  enum class Mode { kAuto, kExact, kSampled } mode = Mode::kAuto;
  long long samples = 100'000;
  std::uint64_t seed = 1;
  double max_log_states = std::log(1e6);  // auto: exact below this
  std::optional<std::vector<double>> prior;
  SolveOptions solve;
};

namespace detail {

// Solves (aggregator, request subset) once.
class OwnFleetCache {
 public:
  OwnFleetCache(const Scenario& s, SolveOptions opts) : s_(s), opts_(opts) {}

  struct Entry {
    bool feasible = true;
    double cost = 0.0, energy = 0.0;
    SolveStatus status = SolveStatus::kOptimal;
  };

  const Entry& get(int player, std::uint32_t mask) {
    const auto key = std::make_pair(player, mask);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Entry e;
    if (mask != 0) {
      std::vector<int> ids;
      for (std::size_t r = 0; r < s_.requests.size(); ++r) {
        if (mask >> r & 1u) ids.push_back(s_.requests[r].id);
      }
      const CoalitionValue v =
          coalition_value(s_, Coalition::singleton(s_.aggregators[player].id), ids, opts_);
      e.feasible = v.feasible();
      e.cost = v.cost;
      e.energy = v.energy_kwh;
      e.status = v.status;
    }
    return cache_.emplace(key, e).first->second;
  }
  std::size_t size() const { return cache_.size(); }

 private:
  const Scenario& s_;
  SolveOptions opts_;
  std::map<std::pair<int, std::uint32_t>, Entry> cache_;
};

}  // namespace detail

inline BenchmarkResult run_aggregator_aware(const Scenario& s, const AwareOptions& opts = {}) {
  const int n = s.players();
  const int nr = static_cast<int>(s.requests.size());
  AumannModel model = AumannModel::uniform(n, nr);
  if (opts.prior) model.prior = *opts.prior;
  model.validate();
  for (int i = 0; i < n; ++i) {
    if (s.aggregators[i].id != i + 1) {
      throw Error(Errc::kInvalidArgument, "aggregators must be listed as 1..n in order");
    }
  }

  BenchmarkResult out;
  out.mode = BenchMode::kAware;
  out.seed = opts.seed;
  bool exact = opts.mode == AwareOptions::Mode::kExact ||
               (opts.mode == AwareOptions::Mode::kAuto &&
                model.log_state_count() <= opts.max_log_states);
  out.exact = exact;
  detail::OwnFleetCache cache(s, opts.solve);

  std::vector<double> sum_c(n, 0.0), sum_e(n, 0.0), sq_c(n, 0.0), sq_e(n, 0.0);
  double feasible_weight = 0.0, infeasible_weight = 0.0;
  std::vector<int> profile(nr, 0);
  std::vector<const detail::OwnFleetCache::Entry*> entries(n);

  auto accumulate = [&](double w) {
    bool feasible = true;
    for (int i = 0; i < n; ++i) {
      entries[i] = &cache.get(i, model.cell(i, profile));
      feasible = feasible && entries[i]->feasible;
      if (entries[i]->status == SolveStatus::kBudgetExhausted) {
        out.status = SolveStatus::kBudgetExhausted;
      }
    }
    if (!feasible) {
      infeasible_weight += w;
      return;
    }
    feasible_weight += w;
    for (int i = 0; i < n; ++i) {
      sum_c[i] += w * entries[i]->cost;
      sum_e[i] += w * entries[i]->energy;
      sq_c[i] += w * entries[i]->cost * entries[i]->cost;
      sq_e[i] += w * entries[i]->energy * entries[i]->energy;
    }
  };

  if (exact) {
    if (model.log_state_count() > std::log(4e9)) {
      throw Error(Errc::kDimensionTooLarge, "too many assignment profiles for exact mode");
    }
    while (true) {
      accumulate(model.probability(profile));
      int r = 0;
      while (r < nr && ++profile[r] == n) profile[r++] = 0;
      if (r == nr) break;
    }
  } else {
    if (opts.samples <= 0) throw Error(Errc::kInvalidArgument, "samples must be positive");
    std::vector<double> cdf(n);
    std::partial_sum(model.prior.begin(), model.prior.end(), cdf.begin());
    for (long long k = 0; k < opts.samples; ++k) {
      for (int r = 0; r < nr; ++r) {
        const double u = uniform01(opts.seed, static_cast<std::uint64_t>(k) * nr + r);
        int a = 0;
        while (a + 1 < n && u >= cdf[a]) ++a;
        profile[r] = a;
      }
      accumulate(1.0);
    }
    out.samples = opts.samples;
  }

  const double total = feasible_weight + infeasible_weight;
  out.infeasible_mass = total > 0 ? infeasible_weight / total : 0.0;
  if (feasible_weight <= 0.0 && out.status != SolveStatus::kBudgetExhausted) {
    out.status = SolveStatus::kInfeasible;
    out.certificate = "every assignment profile is infeasible";
  }
  for (int i = 0; i < n; ++i) {
    BenchmarkRow row;
    row.aggregator = i + 1;
    if (feasible_weight > 0.0) {
      row.cost = sum_c[i] / feasible_weight;
      row.energy_kwh = sum_e[i] / feasible_weight;
      if (!exact && feasible_weight > 1.0) {
        const double m = feasible_weight;
        const double var_c = std::max(0.0, sq_c[i] / m - row.cost * row.cost) * m / (m - 1);
        const double var_e = std::max(0.0, sq_e[i] / m - row.energy_kwh * row.energy_kwh) * m / (m - 1);
        row.cost_se = std::sqrt(var_c / m);
        row.energy_se = std::sqrt(var_e / m);
      }
    } else {
      row.cost = row.energy_kwh = std::numeric_limits<double>::infinity();
    }
    out.rows.push_back(row);
  }
  return out;
}

inline RoutingProblem make_blind_problem(const Scenario& s) {
  RoutingProblem p = make_coalition_problem(s, Coalition::grand(s.players()));
  p.own_chargers_only = true;
  return p;
}

inline BenchmarkResult run_aggregator_blind(const Scenario& s, const SolveOptions& opts = {}) {
  const CoalitionValue v = solve_routing(s, make_blind_problem(s), opts);
  BenchmarkResult out;
  out.mode = BenchMode::kBlind;
  out.status = v.status;
  out.certificate = v.certificate;
  for (const auto& a : s.aggregators) {
    BenchmarkRow row;
    row.aggregator = a.id;
    if (!v.feasible()) {
      row.cost = row.energy_kwh = std::numeric_limits<double>::infinity();
    }
    for (const auto& share : v.solution.per_aggregator) {
      if (share.aggregator == a.id) {
        row.cost = share.cost;
        row.energy_kwh = share.energy_kwh;
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace evcoop

#endif  // EVCOOP_AUMANN_HPP
