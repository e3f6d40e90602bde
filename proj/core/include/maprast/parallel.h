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

#ifndef MAPRAST_PARALLEL_H_
#define MAPRAST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace maprast {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Indices are split
// into contiguous chunks; callers must write only to per-index slots so the
// result never depends on the worker count. Exceptions thrown by fn are
// rethrown on the calling thread (the one from the lowest index wins).
void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn);

}  // namespace maprast

#endif  // MAPRAST_PARALLEL_H_
