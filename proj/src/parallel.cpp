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

#include "evrec/parallel.hpp"

#include <atomic>

namespace evrec {

namespace {
std::atomic<int> g_thread_count{0};
}

int thread_count() {
  const int cap = g_thread_count.load(std::memory_order_relaxed);
  if (cap > 0) return cap;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_thread_count(int count) {
  g_thread_count.store(count > 0 ? count : 0, std::memory_order_relaxed);
}

}  // namespace evrec
