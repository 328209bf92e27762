// Copyright 2026 The fairot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fairot/errors.hpp"

namespace fairot::detail {

/// Two-phase full-tableau simplex for
///   min c'x  s.t.  Ax = b, x >= 0, b >= 0,
/// with Bland's rule, so it terminates on the degenerate bases the
/// tuple-indexed transport polytopes produce. Redundant equality rows are
/// tolerated (their artificials stay basic at zero). Sized for small
/// problems; callers cap the variable count.
class DenseSimplex {
 public:
  struct Result {
    std::vector<double> x;
    double objective = 0.0;
  };

  /// `a` is row-major, rows x cols.
  static Result minimize(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                         const std::vector<double>& b, const std::vector<double>& c) {
    DenseSimplex s(a, rows, cols, b, c);
    return s.run();
  }

 private:
  DenseSimplex(const std::vector<double>& a, std::size_t rows, std::size_t cols,
               const std::vector<double>& b, const std::vector<double>& c)
      : rows_(rows), cols_(cols), total_(cols + rows), cost_(c) {
    // Tableau columns: structural vars, artificials, rhs.
    tab_.assign(rows_ * (total_ + 1), 0.0);
    basis_.assign(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < cols_; ++j) tab(r, j) = a[r * cols_ + j];
      tab(r, cols_ + r) = 1.0;
      rhs(r) = b[r];
      basis_[r] = cols_ + r;
    }
  }

  double& tab(std::size_t r, std::size_t j) { return tab_[r * (total_ + 1) + j]; }
  double& rhs(std::size_t r) { return tab_[r * (total_ + 1) + total_]; }

  Result run() {
    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(total_, 0.0);
    for (std::size_t j = cols_; j < total_; ++j) phase1[j] = 1.0;
    const double art_total = iterate(phase1, /*restrict_to_structural=*/false);
    if (art_total > 1e-7) {
      throw InfeasibleError("simplex: equality system is infeasible");
    }
    // Pivot lingering artificials out where a structural column allows it;
    // rows where none does are redundant and stay parked at zero.
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (std::abs(tab(r, j)) > 1e-9) {
          do_pivot(r, j);
          break;
        }
      }
    }
    // Phase 2 over the structural objective.
    std::vector<double> full_cost(total_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) full_cost[j] = cost_[j];
    const double objective = iterate(full_cost, /*restrict_to_structural=*/true);

    Result res;
    res.x.assign(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) res.x[basis_[r]] = std::max(0.0, rhs(r));
    }
    res.objective = objective;
    return res;
  }

  // Runs Bland-rule pivots for the given objective; returns its final value.
  double iterate(const std::vector<double>& obj, bool restrict_to_structural) {
    const std::size_t scan_end = restrict_to_structural ? cols_ : total_;
    const std::size_t max_pivots = 2000 * (rows_ + 1) + 200 * cols_ + 10000;
    std::size_t pivots = 0;
    for (;;) {
      // Reduced costs via the current basis multipliers.
      std::size_t enter = total_;
      for (std::size_t j = 0; j < scan_end; ++j) {
        if (is_basic(j)) continue;
        double red = obj[j];
        for (std::size_t r = 0; r < rows_; ++r) red -= obj[basis_[r]] * tab(r, j);
        if (red < -1e-10) {
          enter = j;  // Bland: lowest eligible index
          break;
        }
      }
      if (enter == total_) break;

      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double col = tab(r, enter);
        if (col > 1e-11) {
          const double ratio = rhs(r) / col;
          if (ratio < best_ratio - 1e-13 ||
              (ratio < best_ratio + 1e-13 && (leave == rows_ || basis_[r] < basis_[leave]))) {
            best_ratio = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows_) {
        throw InfeasibleError("simplex: objective unbounded below");
      }
      do_pivot(leave, enter);
      if (++pivots > max_pivots) {
        throw InfeasibleError("simplex exceeded its pivot budget");
      }
    }
    double value = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) value += obj[basis_[r]] * rhs(r);
    return value;
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] == j) return true;
    }
    return false;
  }

  void do_pivot(std::size_t prow, std::size_t pcol) {
    const double pivot = tab(prow, pcol);
    const double inv = 1.0 / pivot;
    for (std::size_t j = 0; j <= total_; ++j) tab(prow, j) *= inv;
    tab(prow, pcol) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == prow) continue;
      const double factor = tab(r, pcol);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= total_; ++j) tab(r, j) -= factor * tab(prow, j);
      tab(r, pcol) = 0.0;
    }
    basis_[prow] = pcol;
    if (rhs(prow) < 0.0) rhs(prow) = 0.0;  // rounding at a degenerate vertex
  }

  std::size_t rows_, cols_, total_;
  std::vector<double> cost_;
  std::vector<double> tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace fairot::detail
