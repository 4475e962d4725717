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

#include "war/unit_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "war/error.hpp"
#include "war/kernels.hpp"

namespace war {
namespace {

// Reversals up to this size are rounding noise and get repaired as ties.
constexpr double kReversalTolerance = 1e-12;

void check_grid(const std::vector<double>& values) {
  if (values.size() < 2) throw DegenerateMapError("unit map needs at least two grid values");
}

void check_no_reversal(const std::vector<double>& v, const char* what) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      throw DegenerateMapError(std::string(what) + ": non-finite value at grid index " +
                               std::to_string(k));
    }
    if (k > 0 && v[k] < v[k - 1] - kReversalTolerance) {
      throw DegenerateMapError(std::string(what) + ": not monotone at grid index " +
                               std::to_string(k) + " (" + std::to_string(v[k - 1]) + " > " +
                               std::to_string(v[k]) + ")");
    }
  }
}

}  // namespace

namespace detail {

std::size_t repair_ties(std::vector<double>& v) {
  const std::size_t m = v.size() - 1;
  // A ramp needs a few representable doubles per point; gaps narrower than
  // that are folded into the run.
  auto too_narrow = [](double lo, double hi, std::size_t points) {
    const double ulp = std::nextafter(std::max(std::fabs(lo), std::fabs(hi)), 2.0) -
                       std::max(std::fabs(lo), std::fabs(hi));
    return hi - lo < 4.0 * ulp * static_cast<double>(points + 1);
  };
  std::size_t runs = 0;
  std::size_t k = 1;
  while (k <= m) {
    if (v[k] > v[k - 1]) {
      ++k;
      continue;
    }
    std::size_t a = k - 1;
    std::size_t b = k;
    while (b + 1 <= m && (v[b + 1] <= v[a] || too_narrow(v[a], v[b + 1], b - a + 1))) ++b;
    if (b < m) {
      const double base = v[a];
      const auto len = static_cast<double>(b - a + 1);
      const double rise = std::min(kTieRamp, 0.5 * (v[b + 1] - base));
      for (std::size_t t = 1; t <= b - a; ++t) v[a + t] = base + rise * static_cast<double>(t) / len;
    } else {
      // The run reaches the top end: ramp down towards the left neighbour.
      while (a > 0 && too_narrow(v[a - 1], v[m], m - a + 1)) --a;
      if (a == 0) throw DegenerateMapError("constant map cannot be made strictly increasing");
      const double top = v[m];
      const auto len = static_cast<double>(m - a + 1);
      const double rise = std::min(kTieRamp, 0.5 * (top - v[a - 1]));
      for (std::size_t t = 0; t <= m - a; ++t) {
        v[m - t] = top - rise * static_cast<double>(t) / len;
      }
    }
    ++runs;
    k = b + 1;
  }
  return runs;
}

UnitMap finish_map(std::vector<double> values, const char* what) {
  check_grid(values);
  check_no_reversal(values, what);
  for (double& x : values) x = std::clamp(x, 0.0, 1.0);
  values.front() = 0.0;
  values.back() = 1.0;
  detail::repair_ties(values);
  return UnitMap::from_values(std::move(values));
}

}  // namespace detail

UnitMap UnitMap::identity(std::size_t m) {
  if (m == 0) throw DomainError("grid size must be positive");
  std::vector<double> v(m + 1);
  const auto md = static_cast<double>(m);
  for (std::size_t k = 0; k <= m; ++k) v[k] = static_cast<double>(k) / md;
  return UnitMap(std::move(v));
}

UnitMap UnitMap::from_values(std::vector<double> values) {
  check_grid(values);
  if (values.front() != 0.0 || values.back() != 1.0) {
    throw DegenerateMapError("unit map endpoints must be exactly 0 and 1");
  }
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] > values[k - 1])) {
      throw DegenerateMapError("unit map not strictly increasing at grid index " +
                               std::to_string(k));
    }
  }
  return UnitMap(std::move(values));
}

UnitMap UnitMap::from_data(std::vector<double> values) {
  check_grid(values);
  check_no_reversal(values, "unit map data");
  for (double x : values) {
    if (x < 0.0 || x > 1.0) throw DegenerateMapError("unit map data outside [0, 1]");
  }
  detail::repair_ties(values);
  const double lo = values.front();
  const double hi = values.back();
  if (lo != 0.0 || hi != 1.0) {
    const double span = hi - lo;
    for (double& x : values) x = (x - lo) / span;
    values.front() = 0.0;
    values.back() = 1.0;
    detail::repair_ties(values);
  }
  return from_values(std::move(values));
}

UnitMap UnitMap::sample(std::size_t m, const std::function<double(double)>& f) {
  if (m == 0) throw DomainError("grid size must be positive");
  std::vector<double> v(m + 1);
  const auto md = static_cast<double>(m);
  for (std::size_t k = 0; k <= m; ++k) v[k] = f(static_cast<double>(k) / md);
  return from_data(std::move(v));
}

double UnitMap::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("evaluate: x outside [0, 1]");
  double out = 0.0;
  kernels::active().interp(values_.data(), grid_size(), &x, &out, 1);
  return out;
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
    throw DomainError("interval requires finite lo < hi");
  }
}

double QuantileCurve::operator()(double p) const {
  return domain_.lo() + domain_.width() * unit_(p);
}

std::vector<double> QuantileCurve::values() const {
  std::vector<double> out(unit_.values().begin(), unit_.values().end());
  for (double& x : out) x = domain_.lo() + domain_.width() * x;
  return out;
}

}  // namespace war
