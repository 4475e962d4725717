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

// Helpers shared by the test binaries. Random maps here are generated with
// std::mt19937_64 on purpose, independently of the library's own generator.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "war/unit_map.hpp"

namespace war::testing {

/// Strictly increasing map from sorted uniforms, smoothed by mixing with the
/// identity so that slopes stay in a moderate range.
inline UnitMap random_map(std::mt19937_64& gen, std::size_t m = kDefaultGridSize,
                          double identity_weight = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t knots = 2 + gen() % 12;
  std::vector<double> xs{0.0, 1.0}, ys{0.0, 1.0};
  for (std::size_t i = 0; i < knots; ++i) {
    xs.push_back(u(gen));
    ys.push_back(u(gen));
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  std::vector<double> v(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(m);
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - xs.begin()), xs.size() - 1);
    const std::size_t i = j - 1;
    const double t = xs[j] > xs[i] ? (x - xs[i]) / (xs[j] - xs[i]) : 0.0;
    const double pl = ys[i] + t * (ys[j] - ys[i]);
    v[k] = identity_weight * x + (1.0 - identity_weight) * pl;
  }
  v.front() = 0.0;
  v.back() = 1.0;
  return UnitMap::from_data(std::move(v));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("war_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace war::testing
