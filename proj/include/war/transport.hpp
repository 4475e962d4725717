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

// Algebra of monotone maps of the unit interval and the 1-D Wasserstein
// metric. All functions are pure; arguments must share one grid size.

#pragma once

#include <span>
#include <vector>

#include "war/unit_map.hpp"

namespace war {

double evaluate(const UnitMap& m, double x);

/// (f o g) sampled on the grid.
UnitMap compose(const UnitMap& f, const UnitMap& g);

/// Exact inverse of the piecewise-linear interpolant of m, resampled on the
/// grid.
UnitMap invert(const UnitMap& m);

/// Contraction towards the identity:
///   alpha > 0: x + alpha (t(x) - x)
///   alpha = 0: x
///   alpha < 0: x + alpha (x - t^{-1}(x))
/// Requires |alpha| <= 1. contract(1, t) returns t itself.
UnitMap contract(double alpha, const UnitMap& t);

/// Same as contract() for alpha < 0, with a precomputed inverse of t.
UnitMap contract(double alpha, const UnitMap& t, const UnitMap& t_inverse);

/// Contraction of t around s:
///   alpha > 0: s + alpha (t - s)
///   alpha = 0: s
///   alpha < 0: s + alpha (s - t^{-1})
/// Requires |alpha| < 1.
UnitMap contract_about(double alpha, const UnitMap& t, const UnitMap& s);
UnitMap contract_about(double alpha, const UnitMap& t, const UnitMap& s,
                       const UnitMap& t_inverse);

/// (integral_0^1 |f - g|^p)^(1/p), composite trapezoid rule on the grid.
double lp_distance(const UnitMap& f, const UnitMap& g, double p);

/// max_k |f[k] - g[k]|
double sup_distance(const UnitMap& f, const UnitMap& g);

/// 2-Wasserstein distance between the distributions with these quantile
/// curves, in the units of the shared domain.
double wasserstein(const QuantileCurve& q1, const QuantileCurve& q2);

/// Pointwise mean of a non-empty list of maps.
UnitMap mean_map(std::span<const UnitMap> maps);

/// Largest grid slope max_k (m[k+1] - m[k]) * M.
double max_slope(const UnitMap& m);
/// Smallest grid slope.
double min_slope(const UnitMap& m);

/// Trapezoid weights helper: integral of (a - b)^2 over the unit grid.
double trapezoid_sq_diff(std::span<const double> a, std::span<const double> b);

namespace detail {

/// Raw inverse of the non-decreasing grid function v[0..m] (v[0] = 0,
/// v[m] = 1) resampled at k / m. When `segment` / `offset` are non-null they
/// receive, per output node, the segment j with v[j] <= y < v[j+1] and the
/// fractional position (y - v[j]) / (v[j+1] - v[j]).
void invert_values(const double* v, std::size_t m, double* out, std::size_t* segment = nullptr,
                   double* offset = nullptr);

}  // namespace detail

}  // namespace war
