// Copyright 2026 The MapRaster Authors.
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

#include "maprast/hungarian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maprast/error.h"

namespace maprast {
namespace {

constexpr double kTightRelTol = 1e-9;
constexpr int kNone = -1;

// Shortest-augmenting-path Hungarian method on a square matrix. Leaves dual
// potentials with cost(i, j) - u[i] - v[j] >= 0, zero on matched edges.
struct Solution {
  std::vector<int> row_to_col;
  std::vector<double> u, v;
};

Solution SolveSquare(const std::vector<double>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internals; index 0 is the virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<int> col_owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    col_owner[0] = i;
    int j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = col_owner[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const int j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Solution s;
  s.row_to_col.assign(n, kNone);
  for (int j = 1; j <= n; ++j) s.row_to_col[col_owner[j] - 1] = j - 1;
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  return s;
}

// Walks the equality subgraph (edges with zero reduced cost) to turn any
// optimal matching into the lexicographically smallest one. Every optimal
// assignment lives in that subgraph, so this never changes the total cost.
class LexicographicRefiner {
 public:
  LexicographicRefiner(const std::vector<double>& cost, int n,
                       const Solution& s, double tol)
      : n_(n), row_to_col_(s.row_to_col), col_to_row_(n, kNone),
        tight_(static_cast<size_t>(n) * n), locked_col_(n, 0) {
    for (int i = 0; i < n; ++i) col_to_row_[row_to_col_[i]] = i;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double reduced = cost[i * n + j] - s.u[i] - s.v[j];
        tight_[i * n + j] = std::abs(reduced) <= tol;
      }
    }
    for (int i = 0; i < n; ++i) tight_[i * n + row_to_col_[i]] = 1;
  }

  std::vector<int> Refine(int rows_to_fix) {
    for (int i = 0; i < rows_to_fix; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (!tight_[i * n_ + j] || locked_col_[j]) continue;
        if (row_to_col_[i] == j || TryReassign(i, j)) {
          locked_col_[j] = 1;
          break;
        }
      }
    }
    return row_to_col_;
  }

 private:
  bool TryReassign(int row, int col) {
    const std::vector<int> saved_r2c = row_to_col_, saved_c2r = col_to_row_;
    const int displaced = col_to_row_[col];
    const int freed = row_to_col_[row];
    row_to_col_[row] = col;
    col_to_row_[col] = row;
    col_to_row_[freed] = kNone;
    row_to_col_[displaced] = kNone;
    locked_col_[col] = 1;
    visited_.assign(n_, 0);
    const bool ok = Augment(displaced);
    locked_col_[col] = 0;
    if (!ok) {
      row_to_col_ = saved_r2c;
      col_to_row_ = saved_c2r;
    }
    return ok;
  }

  bool Augment(int row) {
    for (int j = 0; j < n_; ++j) {
      if (!tight_[row * n_ + j] || locked_col_[j] || visited_[j]) continue;
      visited_[j] = 1;
      if (col_to_row_[j] == kNone || Augment(col_to_row_[j])) {
        row_to_col_[row] = j;
        col_to_row_[j] = row;
        return true;
      }
    }
    return false;
  }

  int n_;
  std::vector<int> row_to_col_, col_to_row_;
  std::vector<char> tight_, locked_col_, visited_;
};

}  // namespace

Assignment HungarianAssign(const CostMatrix& costs) {
  const size_t m = costs.rows(), k = costs.cols();
  double max_abs = 0.0;
  for (size_t r = 0; r < m; ++r) {
    for (size_t c = 0; c < k; ++c) {
      const double v = costs.at(r, c);
      if (!std::isfinite(v)) {
        throw ValidationError("cost matrix entry (" + std::to_string(r) + ", " +
                              std::to_string(c) + ") is not finite");
      }
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  Assignment result;
  if (m == 0 || k == 0) return result;

  // Pad to square with zero-cost dummy rows/columns.
  const int n = static_cast<int>(std::max(m, k));
  std::vector<double> square(static_cast<size_t>(n) * n, 0.0);
  for (size_t r = 0; r < m; ++r) {
    for (size_t c = 0; c < k; ++c) square[r * n + c] = costs.at(r, c);
  }
  const Solution solution = SolveSquare(square, n);
  const double tol = kTightRelTol * std::max(1.0, max_abs) * n;
  LexicographicRefiner refiner(square, n, solution, tol);
  const std::vector<int> row_to_col = refiner.Refine(static_cast<int>(m));
  for (size_t r = 0; r < m; ++r) {
    const int c = row_to_col[r];
    if (c >= 0 && static_cast<size_t>(c) < k) {
      result.pairs.emplace_back(r, static_cast<size_t>(c));
    }
  }
  return result;
}

double AssignmentCost(const CostMatrix& costs, const Assignment& assignment) {
  double total = 0.0;
  for (const auto& [r, c] : assignment.pairs) total += costs.at(r, c);
  return total;
}

}  // namespace maprast
