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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace war {

inline constexpr std::size_t kDefaultGridSize = 1000;

/// Total rise inserted across a flat run when repairing ties.
inline constexpr double kTieRamp = 1e-9;

/// A strictly increasing map of [0, 1] onto itself, stored as its values on
/// the uniform grid k / M, k = 0..M, and extended by linear interpolation.
///
/// Invariants (enforced by every factory): values[0] == 0, values[M] == 1,
/// values strictly increasing. Instances are immutable.
class UnitMap {
 public:
  /// Identity on a grid of M segments.
  static UnitMap identity(std::size_t m = kDefaultGridSize);

  /// Takes values as they are; throws DegenerateMapError unless the
  /// invariants hold exactly.
  static UnitMap from_values(std::vector<double> values);

  /// Builds a map from measured / computed values: ties (and reversals no
  /// larger than rounding noise) are separated by an epsilon ramp, then the
  /// curve is renormalized so the endpoints sit at 0 and 1. Genuine decreases
  /// or values outside [0, 1] throw DegenerateMapError.
  static UnitMap from_data(std::vector<double> values);

  /// Samples f at k / M. The result goes through from_data().
  static UnitMap sample(std::size_t m, const std::function<double(double)>& f);

  /// Number of grid segments M (values().size() == M + 1).
  [[nodiscard]] std::size_t grid_size() const { return values_.size() - 1; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] const double* data() const { return values_.data(); }

  /// Piecewise-linear evaluation; throws DomainError outside [0, 1].
  [[nodiscard]] double operator()(double x) const;

  friend bool operator==(const UnitMap&, const UnitMap&) = default;

 private:
  explicit UnitMap(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// Closed interval [lo, hi] of the data axis.
class Interval {
 public:
  Interval(double lo, double hi);
  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double width() const { return hi_ - lo_; }
  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// Quantile function of a distribution on an Interval, kept in normalized
/// form: q(p) = lo + (hi - lo) * unit(p).
class QuantileCurve {
 public:
  QuantileCurve(Interval domain, UnitMap unit)
      : domain_(domain), unit_(std::move(unit)) {}

  /// Uniform distribution on [0, 1].
  static QuantileCurve uniform(std::size_t m = kDefaultGridSize) {
    return {Interval(0.0, 1.0), UnitMap::identity(m)};
  }

  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] const UnitMap& unit() const { return unit_; }

  /// De-normalized quantile at level p.
  [[nodiscard]] double operator()(double p) const;
  /// De-normalized grid values.
  [[nodiscard]] std::vector<double> values() const;

  friend bool operator==(const QuantileCurve&, const QuantileCurve&) = default;

 private:
  Interval domain_;
  UnitMap unit_;
};

namespace detail {

/// Result path of the map algebra: pins the endpoints, repairs rounding-level
/// ties, and reports a genuine loss of monotonicity as DegenerateMapError
/// with `what` in the message.
UnitMap finish_map(std::vector<double> values, const char* what);

/// Epsilon-ramp repair in place. Returns the number of flat runs repaired.
std::size_t repair_ties(std::vector<double>& values);

}  // namespace detail

}  // namespace war
