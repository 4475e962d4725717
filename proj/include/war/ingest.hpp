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

// Per-period samples to empirical quantile curves on a shared domain.

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "war/unit_map.hpp"

namespace war {

/// Which columns of a delimited file to read, and which rows to keep.
///
/// The period of a row is taken from `period_column` when it is non-empty,
/// otherwise from the year of `date_column`. Dates are YYYY-MM-DD or
/// YYYYMMDD. Month and year filters need a date column.
struct ColumnSpec {
  std::string period_column = "period";
  std::string value_column = "value";
  std::string date_column;
  std::vector<int> months;  // empty keeps every month
  std::optional<int> year_from;
  std::optional<int> year_to;
  char delimiter = ',';
  double value_scale = 1.0;  // e.g. 0.1 for data stored in tenths

  void validate() const;
};

/// Samples grouped by period. Periods are sorted numerically when every key
/// is an integer, lexicographically otherwise.
struct SampleTable {
  std::vector<std::string> periods;
  std::vector<std::vector<double>> values;  // parallel to periods
  std::size_t dropped_rows = 0;             // missing or non-numeric values

  /// Throws InputError unless every period has at least two finite values.
  void validate() const;
};

/// Parses delimited text with a header row. Quoted fields are supported.
SampleTable parse_samples(std::istream& in, const ColumnSpec& spec);
SampleTable load_samples(const std::string& path, const ColumnSpec& spec);

struct EmpiricalSeries {
  std::vector<std::string> periods;
  std::vector<QuantileCurve> curves;
  Interval domain{0.0, 1.0};
  // Periods whose curve needed tie repair (repeated sample values).
  std::vector<std::string> tie_repaired;

  [[nodiscard]] bool warning() const { return !tie_repaired.empty(); }
  void validate() const;
};

/// Linear interpolation of order statistics: with sorted x_(0..n-1) and
/// h = p (n - 1), q(p) = x_(floor h) + (h - floor h)(x_(floor h + 1) - x_(floor h)).
/// The domain defaults to the global sample range padded by 1% on each side.
/// The unit curve is pinned to 0 and 1 at the domain ends; interior values
/// come from the data, with ties separated by the epsilon ramp.
EmpiricalSeries empirical_quantiles(const SampleTable& table, std::size_t m = kDefaultGridSize,
                                    const std::optional<Interval>& domain = std::nullopt);

/// The quantile values alone for one sorted sample, at p = k / m.
std::vector<double> sample_quantiles(const std::vector<double>& sorted, std::size_t m);

}  // namespace war
