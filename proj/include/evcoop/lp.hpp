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

#ifndef EVCOOP_LP_HPP
#define EVCOOP_LP_HPP

// Small dense two-phase simplex (Bland's rule) for the LPs that show up here:
// Core feasibility, per-player Core extremes and charging schedules. Variables
// are nonnegative with optional finite upper bounds.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "evcoop/error.hpp"

namespace evcoop::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kEps = 1e-9;

enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;

  bool optimal() const { return status == Status::kOptimal; }
};

class LinearProgram {
 public:
  using Terms = std::vector<std::pair<int, double>>;

  int add_variable(double cost, double upper = kInf) {
    costs_.push_back(cost);
    uppers_.push_back(upper);
    return static_cast<int>(costs_.size()) - 1;
  }

  void add_constraint(Terms terms, Sense sense, double rhs) {
    for (const auto& [j, a] : terms) {
      if (j < 0 || j >= num_variables()) {
        throw Error(Errc::kInvalidArgument, "constraint references unknown variable");
      }
      (void)a;
    }
    rows_.push_back({std::move(terms), sense, rhs});
  }

  int num_variables() const { return static_cast<int>(costs_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }

  Result minimize() const;
  Result maximize() const {
    LinearProgram neg = *this;
    for (double& c : neg.costs_) c = -c;
    Result r = neg.minimize();
    r.objective = -r.objective;
    return r;
  }

 private:
  struct Row {
    Terms terms;
    Sense sense;
    double rhs;
  };

  std::vector<double> costs_;
  std::vector<double> uppers_;
  std::vector<Row> rows_;
};

namespace detail {

// Row-major tableau with the objective in the last row and rhs in the last
// column. basis[i] is the column basic in row i.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols),
        a_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  double& obj(int j) { return at(m_, j); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= n_; ++j) at(r, j) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Runs simplex iterations over columns [0, allowed) on the current
  // objective row (reduced costs, minimization). Returns false if unbounded.
  bool optimize(int allowed) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (obj(j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= kEps) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - kEps ||
            (std::abs(ratio - best) <= kEps && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

 private:
  int m_, n_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

}  // namespace detail

inline Result LinearProgram::minimize() const {
  const int nv = num_variables();
  // Expand upper bounds into explicit rows.
  std::vector<Row> rows = rows_;
  for (int j = 0; j < nv; ++j) {
    if (uppers_[j] < kInf) rows.push_back({{{j, 1.0}}, Sense::kLessEqual, uppers_[j]});
  }
  const int m = static_cast<int>(rows.size());

  // Normalize to nonnegative right-hand sides.
  std::vector<std::vector<double>> dense(m, std::vector<double>(nv, 0.0));
  std::vector<Sense> sense(m);
  std::vector<double> b(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, a] : rows[i].terms) dense[i][j] += a;
    sense[i] = rows[i].sense;
    b[i] = rows[i].rhs;
    if (b[i] < 0.0) {
      for (double& a : dense[i]) a = -a;
      b[i] = -b[i];
      if (sense[i] == Sense::kLessEqual) {
        sense[i] = Sense::kGreaterEqual;
      } else if (sense[i] == Sense::kGreaterEqual) {
        sense[i] = Sense::kLessEqual;
      }
    }
  }
  int n_slack = 0, n_art = 0;
  for (Sense s : sense) {
    if (s != Sense::kEqual) ++n_slack;
    if (s != Sense::kLessEqual) ++n_art;
  }
  const int art_begin = nv + n_slack;
  const int cols = art_begin + n_art;
  detail::Tableau t(m, cols);
  int next_slack = nv, next_art = art_begin;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nv; ++j) t.at(i, j) = dense[i][j];
    t.rhs(i) = b[i];
    if (sense[i] == Sense::kLessEqual) {
      t.at(i, next_slack) = 1.0;
      t.basis()[i] = next_slack++;
    } else {
      if (sense[i] == Sense::kGreaterEqual) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      t.basis()[i] = next_art++;
    }
  }

  Result result;
  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int j = art_begin; j < cols; ++j) t.obj(j) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] >= art_begin) {
        for (int j = 0; j <= cols; ++j) t.obj(j) -= t.at(i, j);
      }
    }
    t.optimize(cols);
    if (-t.obj(cols) > kEps * std::max(1.0, [&] {
          double s = 0.0;
          for (double v : b) s += v;
          return s;
        }())) {
      result.status = Status::kInfeasible;
      return result;
    }
    // Drive artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < art_begin) continue;
      for (int j = 0; j < art_begin; ++j) {
        if (std::abs(t.at(i, j)) > kEps) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 on the original costs, artificial columns frozen.
  for (int j = 0; j <= cols; ++j) t.obj(j) = 0.0;
  for (int j = 0; j < nv; ++j) t.obj(j) = costs_[j];
  for (int i = 0; i < m; ++i) {
    const int bj = t.basis()[i];
    if (bj < nv && costs_[bj] != 0.0) {
      const double f = costs_[bj];
      for (int j = 0; j <= cols; ++j) t.obj(j) -= f * t.at(i, j);
    }
  }
  if (!t.optimize(art_begin)) {
    result.status = Status::kUnbounded;
    return result;
  }
  result.status = Status::kOptimal;
  result.x.assign(nv, 0.0);
  for (int i = 0; i < m; ++i) {
    const int bj = t.basis()[i];
    if (bj < nv) result.x[bj] = std::max(0.0, t.rhs(i));
  }
  double obj = 0.0;
  for (int j = 0; j < nv; ++j) obj += costs_[j] * result.x[j];
  result.objective = obj;
  return result;
}

}  // namespace evcoop::lp

#endif  // EVCOOP_LP_HPP
