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

#ifndef MAPRAST_ERROR_H_
#define MAPRAST_ERROR_H_

#include <stdexcept>
#include <string>

namespace maprast {

// Raised when an input violates a documented invariant (bad geometry, grid
// mismatch, malformed file). The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised for failures during computation on valid inputs, e.g. a loss that
// became non-finite during fitting. The CLI maps it to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace maprast

#endif  // MAPRAST_ERROR_H_
