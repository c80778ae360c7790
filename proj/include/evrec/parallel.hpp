// Copyright 2026 The evrec authors
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

#include <thread>
#include <vector>

namespace evrec {

/// Current cap on data-parallel workers (defaults to hardware concurrency).
int thread_count();

/// Set the worker cap; 0 restores the hardware default.
void set_thread_count(int count);

/// Run fn(i) for i in [begin, end), split into contiguous chunks across the
/// worker threads. Callers must write disjoint outputs per index so results
/// do not depend on the thread count. cost_per_item is a rough operation
/// count used to skip threading when the job is too small to pay for it.
template <class Fn>
void parallel_for(int begin, int end, Fn&& fn, size_t cost_per_item = 1) {
  const int range = end - begin;
  if (range <= 0) return;
  constexpr size_t kSpawnWorthwhile = 1 << 17;
  int workers = thread_count();
  if (workers > range) workers = range;
  if (static_cast<size_t>(range) * cost_per_item < kSpawnWorthwhile) workers = 1;
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (range + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * chunk;
    const int hi = lo + chunk < end ? lo + chunk : end;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace evrec
