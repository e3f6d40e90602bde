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

#ifndef MAPRAST_HUNGARIAN_H_
#define MAPRAST_HUNGARIAN_H_

#include <cstddef>
#include <utility>
#include <vector>

namespace maprast {

// Dense row-major cost matrix; rows are predictions, columns ground truths.
class CostMatrix {
 public:
  CostMatrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

 private:
  size_t rows_, cols_;
  std::vector<double> data_;
};

// (prediction index, ground-truth index) pairs sorted by prediction index.
struct Assignment {
  std::vector<std::pair<size_t, size_t>> pairs;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Minimum-cost assignment of size min(rows, cols). Among optimal
// assignments the lexicographically smallest pair list is returned. Throws
// ValidationError for non-finite entries.
Assignment HungarianAssign(const CostMatrix& costs);

double AssignmentCost(const CostMatrix& costs, const Assignment& assignment);

}  // namespace maprast

#endif  // MAPRAST_HUNGARIAN_H_
