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

#include <cstdint>
#include <limits>

namespace war {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// Counter-based 64-bit generator (SplitMix64 output function applied to
/// key + counter * golden-gamma).
///
/// Stream-split rule: the substream with id `i` of a generator keyed `k` is
/// keyed mix(k ^ mix(i + 1)), with its counter reset to 0. Experiments derive
/// one substream per chain / replicate / grid cell from the run seed, so the
/// draws seen by a chain never depend on thread scheduling.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(Seed seed) : key_(mix(seed.value)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGamma * ++counter_); }

  [[nodiscard]] Rng substream(std::uint64_t id) const {
    Rng child;
    child.key_ = mix(key_ ^ mix(id + 1));
    return child;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased (rejection on the low product word).
  std::uint64_t below(std::uint64_t n);

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  Rng() = default;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace war
