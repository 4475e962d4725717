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

#include "war/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include "war/error.hpp"

namespace war {

double zeta(int k, double x) {
  if (k == 0) return x;
  const double pk = std::numbers::pi * static_cast<double>(k);
  return x - std::sin(pk * x) / (std::fabs(static_cast<double>(k)) * std::numbers::pi);
}

double zeta_derivative(int k, double x) {
  if (k == 0) return 1.0;
  const double sign = k > 0 ? 1.0 : -1.0;
  return 1.0 - sign * std::cos(std::numbers::pi * static_cast<double>(k) * x);
}

UnitMap zeta_map(int k, std::size_t m) {
  std::vector<double> v(m + 1);
  const auto md = static_cast<double>(m);
  for (std::size_t i = 0; i <= m; ++i) v[i] = zeta(k, static_cast<double>(i) / md);
  return detail::finish_map(std::move(v), "zeta");
}

void NoiseSpec::validate() const {
  if (k_max < 1) throw ConfigError("noise: k_max must be >= 1");
  if (weights.empty()) throw ConfigError("noise: need at least one mixture component");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("noise: weights must be non-negative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("noise: weights must sum to 1");
  if (!(include_identity_prob >= 0.0 && include_identity_prob <= 1.0)) {
    throw ConfigError("noise: include_identity_prob must lie in [0, 1]");
  }
}

std::vector<std::pair<int, double>> NoiseSpec::k_law() const {
  std::vector<std::pair<int, double>> law;
  const double each = (1.0 - include_identity_prob) / (2.0 * k_max);
  for (int k = -k_max; k <= k_max; ++k) law.emplace_back(k, k == 0 ? include_identity_prob : each);
  return law;
}

int sample_k(const NoiseSpec& spec, Rng& rng) {
  if (spec.include_identity_prob >= 1.0) return 0;
  if (spec.include_identity_prob > 0.0 && rng.uniform() < spec.include_identity_prob) return 0;
  const auto idx = static_cast<int>(rng.below(2 * static_cast<std::uint64_t>(spec.k_max)));
  // idx in [0, 2 k_max): 0..k_max-1 -> -k_max..-1, k_max.. -> 1..k_max
  return idx < spec.k_max ? idx - spec.k_max : idx - spec.k_max + 1;
}

UnitMap sample_noise_map(const NoiseSpec& spec, Rng& rng, std::size_t m) {
  std::vector<int> ks(spec.n_components());
  for (int& k : ks) k = sample_k(spec, rng);
  if (std::all_of(ks.begin(), ks.end(), [](int k) { return k == 0; })) {
    return UnitMap::identity(m);
  }
  std::vector<double> v(m + 1, 0.0);
  const auto md = static_cast<double>(m);
  for (std::size_t i = 0; i <= m; ++i) {
    const double x = static_cast<double>(i) / md;
    double acc = 0.0;
    for (std::size_t j = 0; j < ks.size(); ++j) acc += spec.weights[j] * zeta(ks[j], x);
    v[i] = acc;
  }
  return detail::finish_map(std::move(v), "noise map");
}

double lipschitz_bound(const NoiseSpec& spec) {
  std::vector<int> support;
  for (const auto& [k, p] : spec.k_law()) {
    if (p > 0.0) support.push_back(k);
  }
  const int k_abs = std::accumulate(support.begin(), support.end(), 0,
                                    [](int a, int k) { return std::max(a, std::abs(k)); });
  if (k_abs == 0) return 1.0;

  // Enumerate realizable component tuples; beyond this size the universal
  // bound 2 is returned directly.
  constexpr std::size_t kMaxTuples = 200000;
  const std::size_t comps = spec.n_components();
  double tuples = std::pow(static_cast<double>(support.size()), static_cast<double>(comps));
  if (tuples > static_cast<double>(kMaxTuples)) return 2.0;

  constexpr int kSamples = 20000;
  const double step = 1.0 / kSamples;
  std::vector<std::size_t> digit(comps, 0);
  double best = 0.0;
  for (;;) {
    for (int s = 0; s <= kSamples; ++s) {
      const double x = s * step;
      double d = 0.0;
      for (std::size_t j = 0; j < comps; ++j) d += spec.weights[j] * zeta_derivative(support[digit[j]], x);
      best = std::max(best, d);
    }
    std::size_t j = 0;
    while (j < comps && ++digit[j] == support.size()) digit[j++] = 0;
    if (j == comps) break;
  }
  // The derivative is (pi k_max)-Lipschitz, so the grid maximum is within
  // pi k_max step / 2 of the true supremum.
  const double slack = std::numbers::pi * k_abs * step * 0.5;
  return std::min(2.0, best + slack);
}

double exact_noise_mean(const NoiseSpec& spec, double x) {
  double mean = spec.include_identity_prob * x;
  const double each = (1.0 - spec.include_identity_prob) / (2.0 * spec.k_max);
  for (int k = 1; k <= spec.k_max; ++k) mean += each * (zeta(k, x) + zeta(-k, x));
  const double wsum = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
  return wsum * mean;
}

}  // namespace war
