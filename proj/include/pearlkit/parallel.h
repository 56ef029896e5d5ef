// Copyright 2026 The Pearlkit Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace pearlkit {

// Runs fn(i) for i in [0, n). With threads <= 1 (or n small) everything runs
// on the calling thread. Work is split into contiguous ranges per thread, so
// results must not depend on cross-index execution order. Exceptions from
// workers are captured and the first one is rethrown on the caller.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn);

int resolve_thread_count(int requested);

}  // namespace pearlkit
