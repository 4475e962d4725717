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

// Random optimal maps with E[T(x)] = x, built as finite mixtures of the
// sine-perturbed maps zeta_k.

#pragma once

#include <cstddef>
#include <vector>

#include "war/rng.hpp"
#include "war/unit_map.hpp"

namespace war {

/// zeta_0(x) = x, zeta_k(x) = x - sin(pi k x) / (|k| pi).
double zeta(int k, double x);

/// d/dx zeta_k(x) = 1 - sign(k) cos(pi k x).
double zeta_derivative(int k, double x);

/// zeta_k on the grid.
UnitMap zeta_map(int k, std::size_t m = kDefaultGridSize);

/// Law of the noise map T = sum_j weights[j] zeta_{K_j}, with K_j i.i.d.:
/// P(K = 0) = include_identity_prob, and the remaining mass spread evenly
/// over +-1..+-k_max.
struct NoiseSpec {
  int k_max = 4;
  std::vector<double> weights = {0.5, 0.5};
  double include_identity_prob = 0.0;

  [[nodiscard]] std::size_t n_components() const { return weights.size(); }

  /// Throws ConfigError on an invalid spec.
  void validate() const;

  /// Degenerate law: T = id almost surely.
  static NoiseSpec none() {
    NoiseSpec s;
    s.include_identity_prob = 1.0;
    return s;
  }

  /// Support of K with probabilities, ordered -k_max..k_max.
  [[nodiscard]] std::vector<std::pair<int, double>> k_law() const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// One draw of K.
int sample_k(const NoiseSpec& spec, Rng& rng);

/// One noise map on a grid of m segments.
UnitMap sample_noise_map(const NoiseSpec& spec, Rng& rng, std::size_t m = kDefaultGridSize);

/// A valid L_eps with E|T(x) - T(y)|^2 <= L_eps^2 |x - y|^2: the largest
/// derivative over every realizable mixture. Never exceeds 2.
double lipschitz_bound(const NoiseSpec& spec);

/// sum_k P(K = k) zeta_k(x), evaluated in +-k pairs.
double exact_noise_mean(const NoiseSpec& spec, double x);

}  // namespace war
