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

#ifndef EVCOOP_GAME_HPP
#define EVCOOP_GAME_HPP

// Cost-sharing cooperative game (N; c): Shapley allocation and the Core
//
//   x_i <= c({i}),  sum_i x_i = c(N),  sum_{i in S} x_i <= c(S) for all S.
//
// Negative allocations are legitimate and never clamped.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "evcoop/coalition.hpp"
#include "evcoop/error.hpp"
#include "evcoop/lp.hpp"

namespace evcoop {

inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();
inline constexpr double kLpTolerance = 1e-9;
inline constexpr double kDollarTolerance = 1e-6;

class CharacteristicFunction {
 public:
  CharacteristicFunction() = default;
  explicit CharacteristicFunction(int n) : n_(n) {
    Coalition::check_player_count(n);
    const std::size_t size = std::size_t{1} << n;
    cost_.assign(size, 0.0);
    energy_.assign(size, 0.0);
    present_.assign(size, 0);
    present_[0] = 1;
  }

  int players() const { return n_; }

  void set(Coalition s, double cost, double energy = 0.0) {
    check(s);
    cost_[s.mask()] = cost;
    energy_[s.mask()] = energy;
    present_[s.mask()] = 1;
  }
  bool has(Coalition s) const { check(s); return present_[s.mask()] != 0; }
  double cost(Coalition s) const { check(s); return cost_[s.mask()]; }
  double energy(Coalition s) const { check(s); return energy_[s.mask()]; }
  double operator()(Coalition s) const { return cost(s); }

  std::optional<Coalition> first_missing() const {
    for (std::uint32_t m = 1; m < present_.size(); ++m) {
      if (!present_[m]) return Coalition(m);
    }
    return std::nullopt;
  }

  // Throws unless every nonempty coalition has a finite cost.
  void require_complete_finite() const {
    if (n_ < 1) throw Error(Errc::kIncompleteFunction, "empty game");
    if (auto miss = first_missing()) {
      throw Error(Errc::kIncompleteFunction,
                  "missing coalition " + miss->to_string());
    }
    for (std::uint32_t m = 1; m < cost_.size(); ++m) {
      if (!std::isfinite(cost_[m])) {
        throw Error(Errc::kNonFiniteValue,
                    "coalition " + Coalition(m).to_string() +
                        " has non-finite cost (infeasible)");
      }
    }
  }

  // Restriction of the game to the members of s, renumbered 1..|s|.
  CharacteristicFunction subgame(Coalition s) const {
    const auto members = s.members();
    CharacteristicFunction sub(static_cast<int>(members.size()));
    for (Coalition t : coalition_iter(sub.players())) {
      std::uint32_t mask = 0;
      for (int p : t.members()) mask |= std::uint32_t{1} << (members[p - 1] - 1);
      if (present_[mask]) sub.set(t, cost_[mask], energy_[mask]);
    }
    return sub;
  }

 private:
  void check(Coalition s) const {
    if (!s.fits(n_)) {
      throw Error(Errc::kDimensionMismatch,
                  "coalition " + s.to_string() + " exceeds " +
                      std::to_string(n_) + " players");
    }
  }

  int n_ = 0;
  std::vector<double> cost_;
  std::vector<double> energy_;
  std::vector<char> present_;
};

enum class AllocationKind { kShapley, kCoreVertex, kUser };

struct Allocation {
  std::vector<double> x;
  AllocationKind kind = AllocationKind::kUser;

  double total() const {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
};

// s!(n-s-1)!/n! for s = 0..n-1.
inline std::vector<double> shapley_weights(int n) {
  std::vector<double> fact(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
  std::vector<double> w(n);
  for (int s = 0; s < n; ++s) w[s] = fact[s] * fact[n - s - 1] / fact[n];
  return w;
}

inline Allocation shapley(const CharacteristicFunction& c) {
  c.require_complete_finite();
  const int n = c.players();
  const auto w = shapley_weights(n);
  const std::uint32_t full = std::uint32_t{1} << n;
  Allocation a{std::vector<double>(n, 0.0), AllocationKind::kShapley};
  // Terms are summed in sorted order, so relabelling players permutes the
  // result bit for bit.
  std::vector<double> terms;
  terms.reserve(full / 2);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    terms.clear();
    for (std::uint32_t m = 0; m < full; ++m) {
      if (m & bit) continue;
      const Coalition s(m);
      terms.push_back(w[s.size()] * (c.cost(Coalition(m | bit)) - c.cost(s)));
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double x : terms) sum += x;
    a.x[i] = sum;
  }
  return a;
}

struct CoreViolation {
  Coalition coalition;
  bool efficiency = false;  // true: sum x != c(N); otherwise sum_S x > c(S)
  double excess = 0.0;      // amount by which the constraint is violated
};

struct CoreCheck {
  bool in_core = false;
  std::vector<CoreViolation> violations;
};

inline CoreCheck in_core(const CharacteristicFunction& c, const Allocation& x,
                         double tol = kDollarTolerance) {
  const int n = c.players();
  if (static_cast<int>(x.x.size()) != n) {
    throw Error(Errc::kDimensionMismatch,
                "allocation has " + std::to_string(x.x.size()) +
                    " entries for " + std::to_string(n) + " players");
  }
  c.require_complete_finite();
  CoreCheck out;
  const Coalition grand = Coalition::grand(n);
  const double total = x.total();
  if (std::abs(total - c.cost(grand)) > tol) {
    out.violations.push_back({grand, true, total - c.cost(grand)});
  }
  for (Coalition s : coalition_iter(n)) {
    if (s == grand) continue;
    double sum = 0.0;
    for (int p : s.members()) sum += x.x[p - 1];
    if (sum - c.cost(s) > tol) out.violations.push_back({s, false, sum - c.cost(s)});
  }
  out.in_core = out.violations.empty();
  return out;
}

namespace detail {

// Core in the shifted variables y_i = c({i}) - x_i >= 0.
// With objective_player >= 0 the objective is y of that player.
inline lp::LinearProgram core_lp(const CharacteristicFunction& c,
                                 int objective_player = -1) {
  const int n = c.players();
  lp::LinearProgram prog;
  std::vector<double> single(n);
  for (int i = 0; i < n; ++i) {
    single[i] = c.cost(Coalition::singleton(i + 1));
    prog.add_variable(i == objective_player ? 1.0 : 0.0);
  }
  const Coalition grand = Coalition::grand(n);
  for (Coalition s : coalition_iter(n)) {
    if (s.size() < 2) continue;
    lp::LinearProgram::Terms terms;
    double rhs = -c.cost(s);
    for (int p : s.members()) {
      terms.emplace_back(p - 1, 1.0);
      rhs += single[p - 1];
    }
    prog.add_constraint(std::move(terms),
                        s == grand ? lp::Sense::kEqual : lp::Sense::kGreaterEqual,
                        rhs);
  }
  if (n == 1) {
    // Efficiency for a single player: x_1 = c({1}), i.e. y_1 = 0.
    prog.add_constraint({{0, 1.0}}, lp::Sense::kEqual, 0.0);
  }
  return prog;
}

inline Allocation from_shifted(const CharacteristicFunction& c,
                               const std::vector<double>& y,
                               AllocationKind kind) {
  Allocation a{std::vector<double>(c.players()), kind};
  for (int i = 0; i < c.players(); ++i) {
    a.x[i] = c.cost(Coalition::singleton(i + 1)) - y[i];
  }
  return a;
}

}  // namespace detail

struct CoreFeasibility {
  bool feasible = false;
  std::optional<Allocation> witness;
};

inline CoreFeasibility core_feasible(const CharacteristicFunction& c) {
  c.require_complete_finite();
  const lp::Result r = detail::core_lp(c).minimize();
  CoreFeasibility out;
  if (!r.optimal()) return out;
  out.feasible = true;
  out.witness = detail::from_shifted(c, r.x, AllocationKind::kUser);
  return out;
}

// Per-player (min, max) of x_i over a nonempty Core, by LP.
inline std::pair<std::vector<double>, std::vector<double>> core_player_range(
    const CharacteristicFunction& c) {
  c.require_complete_finite();
  std::vector<double> lo, hi;
  for (int i = 0; i < c.players(); ++i) {
    const lp::LinearProgram prog = detail::core_lp(c, i);
    const lp::Result best = prog.minimize();
    if (!best.optimal()) throw Error(Errc::kEmptyCore, "the Core is empty");
    const double single = c.cost(Coalition::singleton(i + 1));
    hi.push_back(single - best.objective);
    lo.push_back(single - prog.maximize().objective);
  }
  return {lo, hi};
}

struct CorePolytope {
  bool feasible = false;
  std::vector<Allocation> vertices;
  // Coalitions whose constraint is tight at each vertex (efficiency excluded).
  std::vector<std::vector<Coalition>> binding;
  // Per-player extremes of x_i over the Core (max = worst acceptable cost).
  std::vector<double> player_max;
  std::vector<double> player_min;
};

namespace detail {

// Solves a dense square system by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_square(
    std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace detail

// Vertices of the Core for n <= 4: intersect the efficiency plane with every
// (n-1)-subset of coalition constraints, keep feasible points, deduplicate.
inline CorePolytope core_vertices(const CharacteristicFunction& c) {
  c.require_complete_finite();
  const int n = c.players();
  if (n > 4) {
    throw Error(Errc::kDimensionTooLarge,
                "vertex enumeration supports n <= 4, got " + std::to_string(n));
  }
  if (!core_feasible(c).feasible) throw Error(Errc::kEmptyCore, "the Core is empty");

  const Coalition grand = Coalition::grand(n);
  std::vector<Coalition> cons;
  for (Coalition s : coalition_iter(n)) {
    if (s != grand) cons.push_back(s);
  }
  auto row_of = [n](Coalition s) {
    std::vector<double> row(n, 0.0);
    for (int p : s.members()) row[p - 1] = 1.0;
    return row;
  };
  auto satisfies = [&](const std::vector<double>& x) {
    for (Coalition s : cons) {
      double sum = 0.0;
      for (int p : s.members()) sum += x[p - 1];
      if (sum > c.cost(s) + kLpTolerance) return false;
    }
    return true;
  };

  CorePolytope poly;
  poly.feasible = true;
  std::vector<std::vector<double>> found;
  const int k = n - 1;
  const int m = static_cast<int>(cons.size());
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int idx : pick) {
      a.push_back(row_of(cons[idx]));
      b.push_back(c.cost(cons[idx]));
    }
    a.push_back(std::vector<double>(n, 1.0));
    b.push_back(c.cost(grand));
    if (auto x = detail::solve_square(a, b); x && satisfies(*x)) {
      const bool dup = std::any_of(found.begin(), found.end(), [&](const auto& f) {
        for (int i = 0; i < n; ++i) {
          if (std::abs(f[i] - (*x)[i]) > kLpTolerance) return false;
        }
        return true;
      });
      if (!dup) found.push_back(*x);
    }
    // Next k-combination of [0, m).
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(found.begin(), found.end());
  for (auto& x : found) {
    std::vector<Coalition> tight;
    for (Coalition s : cons) {
      double sum = 0.0;
      for (int p : s.members()) sum += x[p - 1];
      if (std::abs(sum - c.cost(s)) <= kLpTolerance) tight.push_back(s);
    }
    poly.binding.push_back(std::move(tight));
    poly.vertices.push_back({std::move(x), AllocationKind::kCoreVertex});
  }

  std::tie(poly.player_min, poly.player_max) = core_player_range(c);
  return poly;
}

// Barycentric coordinates of an n = 3 allocation on the efficiency plane
// (x / c(N)) and the matching 2-D point in an equilateral triangle with
// corners (0,0), (1,0), (1/2, sqrt(3)/2) for players 1, 2, 3.
struct SimplexPoint {
  double b1 = 0, b2 = 0, b3 = 0;
  double px = 0, py = 0;
};

inline SimplexPoint simplex_projection(const Allocation& x, double grand_cost) {
  if (x.x.size() != 3) {
    throw Error(Errc::kDimensionMismatch, "simplex projection needs n = 3");
  }
  if (grand_cost == 0.0) {
    throw Error(Errc::kInvalidArgument, "simplex projection needs c(N) != 0");
  }
  SimplexPoint p;
  p.b1 = x.x[0] / grand_cost;
  p.b2 = x.x[1] / grand_cost;
  p.b3 = x.x[2] / grand_cost;
  p.px = p.b2 + 0.5 * p.b3;
  p.py = p.b3 * std::sqrt(3.0) / 2.0;
  return p;
}

}  // namespace evcoop

#endif  // EVCOOP_GAME_HPP
