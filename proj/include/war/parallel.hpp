// Copyright 2026 The war Authors
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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace war {

/// Process-wide cap on worker threads; 0 means hardware concurrency.
inline std::atomic<std::size_t>& max_threads_setting() {
  static std::atomic<std::size_t> value{0};
  return value;
}

inline void set_max_threads(std::size_t n) { max_threads_setting() = n; }

inline std::size_t max_threads() {
  const std::size_t cap = max_threads_setting();
  if (cap > 0) return cap;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace detail {
inline bool& inside_parallel_region() {
  thread_local bool inside = false;
  return inside;
}
}  // namespace detail

/// Calls body(i) for i in [0, n). Work is handed out index by index, so the
/// outputs depend only on i, never on which thread ran it. The first
/// exception thrown by a body is rethrown after all workers join. Nested
/// calls run serially on the calling worker.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = detail::inside_parallel_region() ? 1 : std::min(n, max_threads());
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    detail::inside_parallel_region() = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    detail::inside_parallel_region() = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace war
