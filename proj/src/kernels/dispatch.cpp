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

#include <cstdlib>
#include <string_view>

#include "war/kernels.hpp"

namespace war::kernels {

#ifdef WAR_HAVE_AVX2
namespace detail {
const Table& avx2_table_impl();
}
#endif

const Table* avx2_table() {
#ifdef WAR_HAVE_AVX2
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  if (supported) return &detail::avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const Table* initial_table() {
  const char* forced = std::getenv("WAR_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar_table();
  if (const Table* t = avx2_table()) return t;
  return &scalar_table();
}

const Table*& current() {
  static const Table* table = initial_table();
  return table;
}

}  // namespace

const Table& active() { return *current(); }

bool select(std::string_view name) {
  if (name == "scalar") {
    current() = &scalar_table();
    return true;
  }
  if (name == "avx2") {
    if (const Table* t = avx2_table()) {
      current() = t;
      return true;
    }
  }
  return false;
}

}  // namespace war::kernels
