// Copyright 2026 The dplearn Authors
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

#ifndef DPLEARN_PARALLEL_H_
#define DPLEARN_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace dplearn {

// Calls body(i) for every i in [0, n) on up to `workers` threads. Indices
// are handed out dynamically, so body must only write to per-index state;
// callers merge results by index afterwards. workers <= 1 runs inline, in
// order. An exception thrown by body is rethrown on the calling thread.
void ParallelFor(int64_t n, int workers,
                 const std::function<void(int64_t)>& body);

}  // namespace dplearn

#endif  // DPLEARN_PARALLEL_H_
